#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hei {

inline constexpr int kMaxRegions = 16;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Set of boundary regions labelled 1..kMaxRegions, stored as a bitmask
// (bit r-1 <-> region r). Ordered by size, then lexicographically.
class Subsystem {
public:
    constexpr Subsystem() = default;

    static Subsystem of(std::initializer_list<int> regions);
    static Subsystem of(std::span<const int> regions);
    static constexpr Subsystem from_bits(std::uint32_t bits)
    {
        Subsystem s;
        s.bits_ = bits;
        return s;
    }
    static Subsystem all(int n);

    std::uint32_t bits() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    int size() const;
    bool contains(int region) const;
    bool contains(Subsystem other) const { return (other.bits_ & ~bits_) == 0; }
    bool intersects(Subsystem other) const { return (bits_ & other.bits_) != 0; }
    int min() const;
    int max() const;
    std::vector<int> members() const;
    // "123", or "1,10,12" once any label has two digits.
    std::string label() const;

    Subsystem operator|(Subsystem o) const { return from_bits(bits_ | o.bits_); }
    Subsystem operator&(Subsystem o) const { return from_bits(bits_ & o.bits_); }
    Subsystem operator-(Subsystem o) const { return from_bits(bits_ & ~o.bits_); }
    Subsystem with(int region) const;
    Subsystem without(int region) const;

    bool operator==(const Subsystem&) const = default;
    std::strong_ordering operator<=>(const Subsystem& o) const;

private:
    std::uint32_t bits_ = 0;
};

// Calls f on every non-empty subset of s, in increasing bitmask order.
template <typename F>
void for_each_subset(Subsystem s, F&& f)
{
    const std::uint32_t full = s.bits();
    for (std::uint32_t sub = full & (~full + 1); sub != 0; sub = (sub - full) & full)
        f(Subsystem::from_bits(sub));
}

enum class Basis { S, I };
enum class BalanceClass { Unbalanced, Balanced, Superbalanced };

const char* to_string(Basis b);
const char* to_string(BalanceClass b);

// Integer linear combination of S_K (entropies) or I_K (multipartite
// informations) over regions 1..n. Zero coefficients are never stored.
class EntropyForm {
public:
    using Terms = std::map<Subsystem, std::int64_t>;

    EntropyForm(Basis basis, int n);

    Basis basis() const { return basis_; }
    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    std::int64_t coefficient(Subsystem k) const;
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Subsystem support() const;

    EntropyForm& add(Subsystem k, std::int64_t c);
    EntropyForm& add(std::initializer_list<int> k, std::int64_t c) { return add(Subsystem::of(k), c); }
    EntropyForm& operator+=(const EntropyForm& o);
    EntropyForm& operator-=(const EntropyForm& o);
    EntropyForm operator+(const EntropyForm& o) const;
    EntropyForm operator-(const EntropyForm& o) const;
    EntropyForm operator-() const;
    EntropyForm operator*(std::int64_t c) const;

    bool operator==(const EntropyForm&) const = default;

private:
    void check_compatible(const EntropyForm& o) const;

    Basis basis_;
    int n_;
    Terms terms_;
};

// Bijection of 1..n; image[r-1] is where region r goes.
class Permutation {
public:
    explicit Permutation(std::vector<int> image);
    static Permutation identity(int n);
    // Completes a partial map (from[k] -> to[k]) to a bijection of 1..n by
    // pairing the unused domain and codomain labels in increasing order.
    static Permutation extend(std::span<const int> from, std::span<const int> to, int n);

    int n() const { return static_cast<int>(image_.size()); }
    int operator()(int region) const;
    Subsystem operator()(Subsystem s) const;
    Permutation then(const Permutation& next) const;
    Permutation inverse() const;

private:
    std::vector<int> image_;
};

EntropyForm i_to_s(const EntropyForm& form);
EntropyForm s_to_i(const EntropyForm& form);
EntropyForm to_basis(const EntropyForm& form, Basis basis);

BalanceClass classify_balance(const EntropyForm& form);

// I_{(B1)(B2)...(Bm)}: multipartite information with each block treated as a
// single composite region, expanded in the I basis over n regions.
EntropyForm group_regions(std::span<const Subsystem> blocks, int n);

// Joint form obtained by purifying with region i into the purifier and
// dropping it. Input must be superbalanced; result lives in the I basis with
// the same label range (region i no longer appears).
EntropyForm eliminate_region(const EntropyForm& form, int region);

// Rewrites every S_K with pivot in K as S_{complement K} (pure state).
EntropyForm canonicalize_complement(const EntropyForm& form, int pivot = 0);

EntropyForm apply_permutation(const EntropyForm& form, const Permutation& p);

// Relabels the support onto 1..k preserving order. labels[j-1] receives the
// original label of new region j.
EntropyForm compress_support(const EntropyForm& form, std::vector<int>* labels = nullptr);
// Inverse of compress_support.
EntropyForm expand_labels(const EntropyForm& form, std::span<const int> labels, int n);

// Value of the form on an entropy vector indexed by subset bitmask.
std::int64_t evaluate(const EntropyForm& form, std::span<const std::int64_t> entropies);

} // namespace hei
