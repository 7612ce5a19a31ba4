#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hei/compat.hpp"
#include "hei/diagram.hpp"

namespace hei {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kCertificateSchemaVersion = "1";

enum class Verdict { Proved, NotProved };
const char* to_string(Verdict v);

struct ProveOptions {
    bool use_joint = true;
    // Regions to purify away, in order, as original labels. Each joint form
    // is compressed to its support before the next elimination. Empty means
    // the default rule is applied for as long as it finds a non-vanishing
    // joint form.
    std::vector<int> eliminate;
    // Per-diagram search budget; 0 means the diagram's default.
    std::size_t budget = 0;
    std::uint64_t seed = 1;
    bool parallel = true;
    // Constrain only sub-unions of the working form's terms instead of all
    // unions.
    bool term_universe = false;
};

struct JointStep {
    int region = 0;          // label within the stage being reduced
    int original_region = 0;
    EntropyForm joint{Basis::I, 1}; // I basis, labels of the stage being reduced
    std::vector<int> labels;        // compressed joint region k -> original label
};

// Stage 0 is the input form with its own labels; stage s > 0 is the joint
// form of step s compressed to its support.
struct JointTrace {
    std::vector<JointStep> steps;
    std::string reason; // why no further elimination was made

    bool applied() const { return !steps.empty(); }
};

struct ConfigurationProof {
    CccConfiguration ccc;
    CircularDiagram diagram;
    bool gapless = true;
    ProofResult result;
    std::optional<std::size_t> duplicate_of; // earlier entry with the same diagram
};

struct ProofCertificate {
    EntropyForm input_s{Basis::S, 1};
    EntropyForm input_i{Basis::I, 1};
    BalanceClass balance = BalanceClass::Balanced;
    JointTrace joint;
    // Form actually expanded: support compressed to 1..working_n.
    EntropyForm working{Basis::S, 1};
    std::vector<int> labels; // labels[k-1] = original label of working region k
    std::vector<ConfigurationProof> configurations;
    Verdict verdict = Verdict::NotProved;
    bool term_universe = false;
    std::uint64_t seed = 1;
    std::size_t budget = 0;
    std::string version = kVersion;

    int total_exchanges() const;
    std::size_t distinct_diagrams() const;
};

// Region the default rule eliminates, or nullopt when every joint form
// vanishes.
std::optional<int> choose_elimination_region(const EntropyForm& form);

ProofCertificate prove(const EntropyForm& form, const ProveOptions& opts = {});
ProofCertificate prove_without_joint(const EntropyForm& form, ProveOptions opts = {});

struct VerifyOptions {
    std::size_t oracle_samples = 1000;
    std::uint64_t seed = 7;
    bool run_oracle = true;
};

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> problems;
    std::size_t exchanges_checked = 0;
};

VerifyReport verify_certificate(const ProofCertificate& cert, const VerifyOptions& opts = {});

struct SuiteEntry {
    std::string name;
    std::string text;           // parse_inequality input
    std::vector<int> eliminate; // regions the reference reduction purifies
};

std::vector<SuiteEntry> known_inequalities();

struct SuiteRow {
    SuiteEntry entry;
    ProofCertificate certificate;
    double millis = 0;
};

std::vector<SuiteRow> known_suite(const ProveOptions& base = {});

} // namespace hei
