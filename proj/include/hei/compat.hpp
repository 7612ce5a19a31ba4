#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hei/simplex.hpp"

namespace hei {

// Number of alternating blocks X1 Y1 ... Xm Ym of x and y around the circle.
int interlace_count(Subsystem x, Subsystem y);
// Disjoint and interlaced at least twice: their connected surfaces cross.
bool is_incompatible(Subsystem x, Subsystem y);

struct IncompatiblePair {
    Subsystem x; // x < y canonically
    Subsystem y;
    bool operator==(const IncompatiblePair&) const = default;
    auto operator<=>(const IncompatiblePair&) const = default;
};

// Every unordered incompatible pair among terms.
std::vector<IncompatiblePair> all_incompatible_pairs(std::span<const Subsystem> terms);
// Pairs not dominated componentwise by another incompatible pair; these are
// the ones to check, every other pair follows from them.
std::vector<IncompatiblePair> incompatible_pairs(std::span<const Subsystem> terms);
// All unions of at least two regions of 1..n.
std::vector<Subsystem> all_unions(int n);

struct Split {
    Subsystem whole;
    Partition clusters;
    bool operator==(const Split&) const = default;
    std::string label() const; // "12,4"
};

// Splits forced on strict sub-unions of whole by a split of whole.
std::vector<Split> disconnection_implications(const Split& split);

struct CccConfiguration {
    std::vector<Split> generators;
    std::map<Subsystem, Partition> closure; // every disconnected subsystem

    Configuration configuration() const;
    std::vector<Subsystem> disconnected() const;
    std::string label() const; // "{1,3 | 12,4}"
};

// Closure of a set of generator splits.
std::map<Subsystem, Partition> close_splits(std::span<const Split> generators);

// Inclusion-minimal closed disconnection sets that break at least one member
// of every incompatible pair among the unions of terms. With no terms given
// the universe is every union of 1..n.
std::vector<CccConfiguration> enumerate_ccc(int n, std::span<const Subsystem> terms = {});

} // namespace hei
