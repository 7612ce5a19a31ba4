#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hei/algebra.hpp"
#include "hei/simplex.hpp"

namespace hei {

// Cyclic run of regions [start, end] on 1..n (never the whole circle).
struct Arc {
    int start = 1;
    int end = 1;
    int n = 1;

    static Arc from_set(Subsystem s, int n);
    Subsystem set() const;
    int length() const;
    bool operator==(const Arc&) const = default;
};

// A pair of disjoint arcs A = [i, j], B = [k, l], written C^{il}_{kj}: the
// surfaces anchored by the upper chord [il] and lower chord [kj] are
// reconnected into [ij] + [kl].
class Cut {
public:
    static Cut from_arcs(Subsystem a, Subsystem b, int n);
    static Cut from_indices(int i, int l, int k, int j, int n);

    const Arc& first() const { return a_; }
    const Arc& second() const { return b_; }
    int n() const { return a_.n; }
    int level() const { return a_.length() + b_.length() - 1; }
    Chord upper() const { return Chord::full(a_.start, b_.end); }
    Chord lower() const { return Chord::full(b_.start, a_.end); }
    std::string label() const; // "C^{14}_{32}"

    bool operator==(const Cut&) const = default;

private:
    Cut(Arc a, Arc b) : a_(a), b_(b) {}
    Arc a_, b_;
};

// Ordered by level, then by arcs.
std::vector<Cut> enumerate_cuts(int n);
std::uint64_t cut_count_formula(int n);

// c2's arcs sit inside c's arcs (either orientation).
bool induces(const Cut& c, const Cut& c2);
// All four arc intersections non-empty.
bool cuts_cross(const Cut& a, const Cut& b);

// Splits a connected cluster K into K∩A + K∩B when K lies in A∪B and meets
// both arcs.
std::optional<std::pair<Subsystem, Subsystem>> apply_cut_to_surface(Subsystem cluster, const Cut& c);

// S^c_K >= S^c_{K∩A} + S^c_{K∩B} as chords, for a cluster the cut splits.
ChordInequality cut_constraint(Subsystem cluster, const Cut& c);

struct CutCorrection {
    Subsystem in_first;  // I ⊆ A
    Subsystem in_second; // J ⊆ B
    std::int64_t coefficient;
};

std::vector<CutCorrection> cut_corrections(const EntropyForm& form, const Cut& c);
// Q + sum q'_{IJ} I_{(I)(J)}.
EntropyForm apply_cut_to_iform(const EntropyForm& form, const Cut& c);

struct CutDag {
    int n = 0;
    std::vector<Cut> nodes;
    // Transitive reduction of induces: edges[u] lists the cuts u covers.
    std::vector<std::vector<int>> edges;

    std::vector<int> level_histogram() const; // index = level
    std::vector<bool> reachable_from(int u) const;
    bool acyclic() const;
    std::string to_dot() const;
};

CutDag build_cut_dag(int n);

struct CountInterpretation {
    std::string name;
    std::string description;
    std::uint64_t value;
};

struct ConfigurationCount {
    int n = 0;
    std::uint64_t allowed = 0;
    std::uint64_t closed_sets = 0;    // induction-closed (order ideals)
    std::uint64_t crossing_free = 0;  // closed and pairwise non-crossing
    std::vector<CountInterpretation> table;
};

// Allowed cut configurations: non-empty induction-closed cut sets without
// crossing pairs, plus the single complete disconnection that any crossing
// pair forces. n <= 5.
ConfigurationCount count_allowed_configurations(int n);

} // namespace hei
