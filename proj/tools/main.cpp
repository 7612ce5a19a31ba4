#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hei/certificate.hpp"
#include "hei/cuts.hpp"
#include "hei/prover.hpp"
#include "hei/text.hpp"

namespace fs = std::filesystem;
using namespace hei;

namespace {

constexpr int kExitProved = 0;
constexpr int kExitNotProved = 1;
constexpr int kExitInput = 2;

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string join_labels(const std::vector<int>& labels)
{
    std::string s;
    for (std::size_t k = 0; k < labels.size(); ++k)
        s += (k ? "," : "") + std::to_string(labels[k]);
    return s;
}

void print_interpretations(const ConfigurationCount& c)
{
    std::cout << "interpretation                      value\n";
    for (const auto& row : c.table)
        std::printf("  %-32s  %llu   %s\n", row.name.c_str(), static_cast<unsigned long long>(row.value), row.description.c_str());
}

void print_certificate(const ProofCertificate& cert, std::ostream& out)
{
    out << "input    " << render_inequality(cert.input_s) << "\n";
    out << "I basis  " << render_inequality(cert.input_i) << "\n";
    out << "balance  " << to_string(cert.balance) << "\n";
    for (const JointStep& js : cert.joint.steps)
        out << "joint    eliminate " << js.original_region << ": " << render_inequality(js.joint) << "\n";
    out << "joint    " << cert.joint.reason << "\n";
    out << "working  n=" << cert.working.n() << " labels=" << join_labels(cert.labels) << "  "
        << render_inequality(cert.working) << "\n";
    for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
        const auto& cp = cert.configurations[k];
        out << "CCC" << k + 1 << " " << cp.ccc.label() << "\n";
        out << "    " << cp.diagram.red.to_string() << " >= " << cp.diagram.blue.to_string() << "\n";
        if (cp.duplicate_of) {
            out << "    same diagram as CCC" << *cp.duplicate_of + 1 << "\n";
            continue;
        }
        out << "    " << to_string(cp.result.status) << ", " << cp.result.exchanges() << " exchanges, "
            << cp.result.states_explored << " states";
        if (!cp.result.note.empty())
            out << " (" << cp.result.note << ")";
        out << "\n";
    }
    out << "verdict  " << to_string(cert.verdict) << " (" << cert.total_exchanges() << " exchanges over "
        << cert.distinct_diagrams() << (cert.distinct_diagrams() == 1 ? " distinct diagram)\n" : " distinct diagrams)\n");
}

void render_diagrams(const ProofCertificate& cert, const fs::path& dir, bool svg)
{
    fs::create_directories(dir);
    for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
        const auto& cp = cert.configurations[k];
        char stem[32];
        std::snprintf(stem, sizeof stem, "ccc%02zu", k + 1);
        const std::string title = "CCC" + std::to_string(k + 1) + " " + cp.ccc.label();
        write_file(dir / (std::string(stem) + ".dot"), diagram_to_dot(cp.diagram, title));
        if (svg)
            write_file(dir / (std::string(stem) + ".svg"), diagram_to_svg(cp.diagram, title));
    }
}

std::vector<int> parse_region_list(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size() || v < 1)
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw Error("bad region list '" + s + "'");
        }
    }
    return out;
}

// "-I(1,2,3) >= 0" looks like an option to the parser; such arguments are
// moved behind "--" so they are read as positionals.
std::vector<std::string> protect_negative_forms(int argc, char** argv)
{
    std::vector<std::string> args, forms;
    for (int k = 1; k < argc; ++k) {
        std::string a = argv[k];
        if (a == "--") {
            for (++k; k < argc; ++k)
                forms.emplace_back(argv[k]);
            break;
        }
        if (a.size() > 1 && a[0] == '-' && a.find('(') != std::string::npos)
            forms.push_back(a);
        else
            args.push_back(a);
    }
    if (!forms.empty()) {
        args.emplace_back("--");
        args.insert(args.end(), forms.begin(), forms.end());
    }
    std::reverse(args.begin(), args.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Holographic entropy inequality prover"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string text, to_basis_name, dot_path, cert_path, render_dir, eliminate;
    int n = 0, ccc_index = 0;
    std::size_t budget = 0, samples = 1000;
    std::uint64_t seed = 1;
    bool no_joint = false, svg = false, table = false, as_json = false, verify = false, term_universe = false, quiet = false;

    auto* convert = app.add_subcommand("convert", "Print an inequality in the S and I bases");
    convert->add_option("inequality", text, "Inequality text")->required();
    convert->add_option("--n", n, "Number of regions (default: largest index)");
    convert->add_option("--to", to_basis_name, "Only print this basis")->check(CLI::IsMember({"S", "I"}));

    auto* balance = app.add_subcommand("balance", "Classify an inequality as unbalanced, balanced or superbalanced");
    balance->add_option("inequality", text, "Inequality text")->required();
    balance->add_option("--n", n, "Number of regions");

    auto* ccc = app.add_subcommand("ccc", "List the CCC configurations of n regions");
    ccc->add_option("--n", n, "Number of regions")->required()->check(CLI::Range(2, 8));

    auto* cuts = app.add_subcommand("cuts", "List the cuts of n regions by level");
    cuts->add_option("--n", n, "Number of regions")->required()->check(CLI::Range(2, 16));
    cuts->add_option("--dot", dot_path, "Write the cut DAG as DOT");

    auto* count = app.add_subcommand("count-configs", "Count allowed cut configurations");
    count->add_option("--n", n, "Number of regions")->required()->check(CLI::Range(1, 5));
    count->add_flag("--table", table, "Print every counting interpretation");

    auto* prove_cmd = app.add_subcommand("prove", "Prove an inequality with the clean-gap procedure");
    prove_cmd->add_option("inequality", text, "Inequality text")->required();
    prove_cmd->add_option("--n", n, "Number of regions");
    prove_cmd->add_flag("--no-joint", no_joint, "Skip the joint-form reduction");
    prove_cmd->add_option("--eliminate", eliminate, "Comma-separated regions to eliminate, in order");
    prove_cmd->add_option("--budget", budget, "Search states per diagram (0: default)");
    prove_cmd->add_option("--seed", seed, "Seed for the numeric refutation check");
    prove_cmd->add_option("--cert", cert_path, "Write the JSON certificate");
    prove_cmd->add_option("--render", render_dir, "Write one DOT file per configuration");
    prove_cmd->add_flag("--svg", svg, "Also write SVG files with --render");
    prove_cmd->add_flag("--term-universe", term_universe, "Only constrain sub-unions of the inequality's terms");
    prove_cmd->add_flag("-q,--quiet", quiet, "Print only the verdict");

    auto* oracle = app.add_subcommand("oracle", "Sample geodesic lengths against each configuration diagram");
    oracle->add_option("inequality", text, "Inequality text")->required();
    oracle->add_option("--n", n, "Number of regions");
    oracle->add_option("--samples", samples, "Samples per diagram")->required();
    oracle->add_option("--seed", seed, "Sampling seed");
    oracle->add_option("--ccc", ccc_index, "Only this configuration (1-based)");

    auto* suite = app.add_subcommand("suite", "Prove the built-in list of known inequalities");
    suite->add_flag("--json", as_json, "Emit JSON");
    suite->add_flag("--verify", verify, "Verify every certificate");

    auto* verify_cmd = app.add_subcommand("verify", "Check a JSON certificate");
    verify_cmd->add_option("certificate", cert_path, "Certificate path")->required();
    verify_cmd->add_option("--samples", samples, "Oracle samples per exchange");

    try {
        app.parse(protect_negative_forms(argc, argv));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*convert) {
            EntropyForm f = parse_inequality(text, n);
            if (to_basis_name != "I")
                std::cout << (to_basis_name.empty() ? "S: " : "") << render_inequality(i_to_s(f)) << "\n";
            if (to_basis_name != "S")
                std::cout << (to_basis_name.empty() ? "I: " : "") << render_inequality(s_to_i(f)) << "\n";
            return 0;
        }
        if (*balance) {
            std::cout << to_string(classify_balance(parse_inequality(text, n))) << "\n";
            return 0;
        }
        if (*ccc) {
            auto list = enumerate_ccc(n);
            std::cout << list.size() << " configurations\n";
            for (std::size_t k = 0; k < list.size(); ++k) {
                std::cout << "CCC" << k + 1 << " " << list[k].label() << "\n    disconnected:";
                for (const auto& [whole, p] : list[k].closure)
                    std::cout << " " << partition_label(p, whole);
                std::cout << "\n";
            }
            return 0;
        }
        if (*cuts) {
            CutDag dag = build_cut_dag(n);
            std::cout << dag.nodes.size() << " cuts (formula " << cut_count_formula(n) << ")\n";
            auto hist = dag.level_histogram();
            for (std::size_t lv = 1; lv < hist.size(); ++lv) {
                std::cout << "level " << lv << " (" << hist[lv] << "):";
                for (const Cut& c : dag.nodes)
                    if (static_cast<std::size_t>(c.level()) == lv)
                        std::cout << " " << c.label();
                std::cout << "\n";
            }
            if (!dot_path.empty())
                write_file(dot_path, dag.to_dot());
            return 0;
        }
        if (*count) {
            ConfigurationCount c = count_allowed_configurations(n);
            std::cout << c.allowed << "\n";
            if (table)
                print_interpretations(c);
            return 0;
        }
        if (*prove_cmd) {
            EntropyForm f = parse_inequality(text, n);
            ProveOptions opts;
            opts.use_joint = !no_joint;
            opts.eliminate = parse_region_list(eliminate);
            opts.budget = budget;
            opts.seed = seed;
            opts.term_universe = term_universe;
            ProofCertificate cert = prove(f, opts);
            if (quiet)
                std::cout << to_string(cert.verdict) << "\n";
            else
                print_certificate(cert, std::cout);
            if (!cert_path.empty())
                write_file(cert_path, certificate_to_json(cert) + "\n");
            if (!render_dir.empty())
                render_diagrams(cert, render_dir, svg);
            return cert.verdict == Verdict::Proved ? kExitProved : kExitNotProved;
        }
        if (*oracle) {
            EntropyForm f = parse_inequality(text, n);
            if (classify_balance(f) == BalanceClass::Unbalanced)
                throw Error("inequality is not balanced");
            std::vector<int> labels;
            EntropyForm w = compress_support(i_to_s(f), &labels);
            auto list = enumerate_ccc(w.n());
            if (ccc_index < 0 || static_cast<std::size_t>(ccc_index) > list.size())
                throw Error("--ccc must be between 1 and " + std::to_string(list.size()));
            bool refuted = false;
            for (std::size_t k = 0; k < list.size(); ++k) {
                if (ccc_index && k + 1 != static_cast<std::size_t>(ccc_index))
                    continue;
                CircularDiagram d = make_diagram(w.n(), expand_inequality(w, list[k].configuration()));
                OracleVerdict v = numeric_oracle(d, samples, seed + k);
                refuted |= v.counterexample;
                std::printf("CCC%zu %-32s %s  worst margin %.3e over %zu samples\n", k + 1, list[k].label().c_str(),
                            v.counterexample ? "COUNTEREXAMPLE" : "ok", v.worst_margin, v.samples);
            }
            return refuted ? kExitNotProved : 0;
        }
        if (*suite) {
            auto t0 = std::chrono::steady_clock::now();
            auto rows = known_suite();
            double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            bool all = true;
            nlohmann::json out = nlohmann::json::array();
            for (const auto& row : rows) {
                const auto& c = row.certificate;
                all &= c.verdict == Verdict::Proved;
                std::vector<int> eliminated;
                for (const JointStep& js : c.joint.steps)
                    eliminated.push_back(js.original_region);
                std::string checked = "-";
                if (verify) {
                    VerifyReport rep = verify_certificate(c);
                    all &= rep.ok;
                    checked = rep.ok ? "verified" : "REJECTED: " + rep.problems.front();
                }
                if (as_json) {
                    out.push_back({{"name", row.entry.name},
                                   {"verdict", to_string(c.verdict)},
                                   {"eliminated", eliminated},
                                   {"working_n", c.working.n()},
                                   {"configurations", c.configurations.size()},
                                   {"distinct_diagrams", c.distinct_diagrams()},
                                   {"exchanges", c.total_exchanges()},
                                   {"millis", row.millis},
                                   {"verification", checked}});
                } else {
                    std::printf("%-12s %-9s eliminate=%-5s n=%d  ccc=%-3zu distinct=%-3zu exchanges=%-4d %8.2f ms  %s\n",
                                row.entry.name.c_str(), to_string(c.verdict),
                                eliminated.empty() ? "-" : join_labels(eliminated).c_str(), c.working.n(),
                                c.configurations.size(), c.distinct_diagrams(), c.total_exchanges(), row.millis,
                                checked.c_str());
                }
            }
            if (as_json)
                std::cout << out.dump(2) << "\n";
            else
                std::printf("total %.3f s\n", total);
            return all ? kExitProved : kExitNotProved;
        }
        if (*verify_cmd) {
            ProofCertificate cert = certificate_from_json(read_file(cert_path));
            VerifyOptions vo;
            vo.oracle_samples = samples;
            VerifyReport rep = verify_certificate(cert, vo);
            for (const auto& p : rep.problems)
                std::cout << "problem: " << p << "\n";
            std::cout << (rep.ok ? "ok" : "rejected") << " (" << rep.exchanges_checked << " exchanges checked)\n";
            return rep.ok ? 0 : kExitNotProved;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
