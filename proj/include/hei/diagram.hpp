#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hei/simplex.hpp"

namespace hei {

struct CircularDiagram {
    int n = 0;
    ChordMultiset red;
    ChordMultiset blue;
    // Gap j means g_{j+1,j}; closed gaps identify R_j with L_{j+1}.
    std::set<int> gap_closed;

    bool operator==(const CircularDiagram&) const = default;
};

// Cancels red against blue.
CircularDiagram make_diagram(int n, ChordMultiset red, ChordMultiset blue);
CircularDiagram make_diagram(int n, const ChordInequality& ineq);

// Using X >= Y: red + Y >= blue + X suffices for red >= blue.
CircularDiagram with_constraint(const CircularDiagram& d, const ChordInequality& constraint);

// Identifies the endpoints across each listed gap and cancels chords that
// become equal. Remaining chords keep their names.
CircularDiagram close_gaps(const CircularDiagram& d, const std::set<int>& gaps);

bool chords_cross(const Chord& a, const Chord& b);

// For the sorted endpoints p1 < p2 < p3 < p4 of two crossing chords:
// A pairs (p1,p2)(p3,p4), B pairs (p1,p4)(p2,p3).
enum class Repairing { A, B };
std::pair<Chord, Chord> cross_exchange(const Chord& a, const Chord& b, Repairing choice);

bool is_gapless(const CircularDiagram& d);
bool degrees_balanced(const CircularDiagram& d);

struct ExchangeStep {
    std::array<Chord, 2> removed;
    std::array<Chord, 2> inserted;
    std::array<Endpoint, 4> witness; // in circular order
};

struct CancelStep {
    Chord chord;
};

using ProofStep = std::variant<ExchangeStep, CancelStep>;

enum class ProofStatus { Proved, NotProved, NumericallyRefuted };
const char* to_string(ProofStatus s);

struct ProofResult {
    ProofStatus status = ProofStatus::NotProved;
    std::vector<ProofStep> steps;
    std::size_t states_explored = 0;
    std::string note;

    int exchanges() const;
};

struct SearchOptions {
    // Maximum states expanded; 0 means (|red| * 2n)^2.
    std::size_t budget = 0;
};

std::size_t default_budget(const CircularDiagram& d);

// Best-first search over cancellations and red cross exchanges. Returned
// certificates use the fewest exchanges the search can reach.
ProofResult clean_gap_prove(const CircularDiagram& d, const SearchOptions& opts = {});

struct ReplayReport {
    bool ok = true;
    std::optional<std::size_t> failed_step;
    std::string message;
};

// Independent check of a step list against a diagram: every exchange must
// remove two crossing red chords and insert a non-crossing re-pairing of the
// same endpoints; every cancellation must hit both sides; the end state must
// be empty on both sides.
ReplayReport replay(const CircularDiagram& d, const std::vector<ProofStep>& steps);

struct OracleOptions {
    double tolerance = 1e-9; // relative
    double regulator = 1e-4;
};

struct OracleVerdict {
    bool counterexample = false;
    std::size_t samples = 0;
    double worst_margin = 0.0; // min over samples of (red - blue) / scale
    std::vector<double> witness_angles;
};

// Samples 2n boundary angles and weighs every chord by its regulated
// geodesic length in the Poincare disk.
OracleVerdict numeric_oracle(const CircularDiagram& d, std::size_t samples, std::uint64_t seed, const OracleOptions& opts = {});
OracleVerdict oracle_check_exchange(const ExchangeStep& step, int n, std::size_t samples, std::uint64_t seed, const OracleOptions& opts = {});

double geodesic_length(double theta_a, double theta_b, double regulator);

} // namespace hei
