#!/usr/bin/env python3
"""Validate certificates written by `hei prove --cert` against the schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema

CASES = {
    "ssa": ["S(1,2) + S(2,3) >= S(1,2,3) + S(2)"],
    "mmi": ["-I(1,2,3) >= 0"],
    "q3": ["-I(1,2,5) - I(1,3,5) - I(1,4,5) - I(2,3,4) + I(1,2,3,5) + I(1,2,4,5) + I(1,3,4,5) >= 0", "--eliminate", "5"],
    "q4_direct": ["-I(1,2,3) - I(1,4,5) - I(2,3,4) - I(2,3,5) + I(1,2,3,4) + I(1,2,3,5) >= 0", "--no-joint"],
    "sa_reversed": ["S(1,2) >= S(1) + S(2)"],
}


def main():
    schema_path, hei, outdir = sys.argv[1:4]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, args in CASES.items():
        cert = out / f"{name}.json"
        run = subprocess.run([hei, "prove", *args, "--cert", str(cert), "-q"], capture_output=True, text=True)
        if run.returncode not in (0, 1):
            print(f"FAIL {name}: exit {run.returncode}: {run.stderr.strip()}")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(json.loads(cert.read_text())), key=lambda e: list(e.path))
        for e in errors:
            print(f"FAIL {name}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
