#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hei/algebra.hpp"

namespace hei {

// Boundary endpoints around the circle: L1 R1 L2 R2 ... Ln Rn.
// Gap g_{j+1,j} sits between R_j and L_{j+1}.
enum class Side : std::uint8_t { Left, Right };

struct Endpoint {
    int region = 1;
    Side side = Side::Left;

    int position() const { return 2 * (region - 1) + (side == Side::Right ? 1 : 0); }
    static Endpoint at(int position);
    std::string label() const; // "L3", "R1"
    static Endpoint parse(std::string_view s);

    bool operator==(const Endpoint&) const = default;
    std::strong_ordering operator<=>(const Endpoint& o) const { return position() <=> o.position(); }
};

enum class ChordKind : std::uint8_t { Full, LeftHalf, RightHalf };

// Geodesic between two endpoints.
//   [ij]  L_i - R_j   (full)
//   [ij>  L_i - L_j   (i < j)
//   <ij]  R_i - R_j   (i < j)
class Chord {
public:
    static Chord full(int i, int j);
    static Chord left_half(int i, int j);
    static Chord right_half(int i, int j);
    static Chord between(Endpoint a, Endpoint b);
    // Accepts "[i,j]", "[i,j>", "<i,j]" and the compact "[ij]" for i,j < 10.
    static Chord parse(std::string_view s);

    Endpoint lo() const { return lo_; }
    Endpoint hi() const { return hi_; }
    ChordKind kind() const;
    // (i, j) as written in the label.
    std::pair<int, int> indices() const;
    std::string label() const;
    // Crosses the gap g_{j+1,j}: full chord [j+1, j] (or [1,n] for the last gap).
    bool is_gap_chord(int n) const;

    bool operator==(const Chord&) const = default;
    std::strong_ordering operator<=>(const Chord& o) const;

private:
    Chord(Endpoint a, Endpoint b);
    Endpoint lo_, hi_;
};

class ChordMultiset {
public:
    using Map = std::map<Chord, int>;

    ChordMultiset() = default;
    ChordMultiset(std::initializer_list<Chord> chords);

    void add(const Chord& c, int count = 1);
    void remove(const Chord& c, int count = 1);
    int count(const Chord& c) const;
    bool contains(const Chord& c) const { return count(c) > 0; }
    int size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const Map& entries() const { return chords_; }
    std::vector<Chord> flatten() const;
    // Multiplicity of each endpoint position.
    std::map<int, int> endpoint_degrees() const;

    ChordMultiset& operator+=(const ChordMultiset& o);
    ChordMultiset operator+(const ChordMultiset& o) const;
    bool operator==(const ChordMultiset&) const = default;

    // "2[1,3] + [1,4]", or "0".
    std::string to_string() const;

private:
    Map chords_;
    int size_ = 0;
};

// Removes the common part of a and b from both; returns what was removed.
ChordMultiset cancel_common(ChordMultiset& a, ChordMultiset& b);

using Partition = std::vector<Subsystem>;

// True iff cluster is a contiguous run of whole's members in cyclic order.
bool is_restricted_arc(Subsystem cluster, Subsystem whole);
// First member of the run (cyclically), for printing "51" etc.
int arc_start(Subsystem cluster, Subsystem whole);
// Members of cluster in cyclic order inside whole.
std::vector<int> arc_members(Subsystem cluster, Subsystem whole);
// Clusters sorted canonically, validated as an arc partition of whole.
Partition normalize_partition(Partition p, Subsystem whole);
// "12,4" / "3,51".
std::string partition_label(const Partition& p, Subsystem whole);
// Every split of whole into two restricted arcs.
std::vector<Partition> arc_bipartitions(Subsystem whole);

// Phase assignment: which subsystems have disconnected minimal surfaces and
// how they split. Unlisted subsystems are connected unless default_connected
// is off, in which case asking for them is an error.
class Configuration {
public:
    explicit Configuration(bool default_connected = true) : default_connected_(default_connected) {}
    static Configuration completely_connected() { return Configuration(true); }

    void set(Subsystem whole, Partition clusters);
    void set_connected(Subsystem whole);
    Partition clusters(Subsystem whole) const;
    bool is_disconnected(Subsystem whole) const;
    const std::map<Subsystem, Partition>& explicit_entries() const { return entries_; }

private:
    std::map<Subsystem, Partition> entries_;
    bool default_connected_;
};

struct ChordInequality {
    ChordMultiset red;  // larger side
    ChordMultiset blue; // smaller side
    bool operator==(const ChordInequality&) const = default;
    std::string to_string() const;
};

// S^c_K for K = {k1 < ... < km}: sum of [k_{s+1} k_s] with k_{m+1} = k_1.
ChordMultiset connected_expansion(Subsystem k);
ChordMultiset expand_entropy(Subsystem k, const Configuration& cfg);
// Positive coefficients go red, negative blue; common chords cancelled.
ChordInequality expand_inequality(const EntropyForm& form, const Configuration& cfg);

// [ij] -> [j+1, i-1] (indices mod n); same endpoints read across the gaps.
Chord dual_chord(const Chord& c, int n);

} // namespace hei
