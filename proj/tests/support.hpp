#pragma once

#include <cctype>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hei/algebra.hpp"
#include "hei/diagram.hpp"
#include "hei/simplex.hpp"

namespace hei::testing {

// "2[13] + [14]" in the compact chord notation used for printed expansions.
inline ChordMultiset chords(std::string_view text)
{
    ChordMultiset out;
    std::size_t p = 0;
    while (p < text.size()) {
        while (p < text.size() && (text[p] == ' ' || text[p] == '+'))
            ++p;
        if (p == text.size())
            break;
        int mult = 0;
        while (std::isdigit(static_cast<unsigned char>(text[p])))
            mult = 10 * mult + (text[p++] - '0');
        std::size_t end = text.find_first_of("]>", p);
        out.add(Chord::parse(text.substr(p, end + 1 - p)), mult ? mult : 1);
        p = end + 1;
    }
    return out;
}

inline CircularDiagram diagram(int n, std::string_view red, std::string_view blue)
{
    return make_diagram(n, chords(red), chords(blue));
}

inline EntropyForm random_form(std::mt19937_64& rng, Basis basis, int n, int max_terms = 8, int max_coeff = 5)
{
    EntropyForm f(basis, n);
    std::uniform_int_distribution<std::uint32_t> subset(1, (1u << n) - 1);
    std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
    std::uniform_int_distribution<int> count(0, max_terms);
    for (int k = count(rng); k > 0; --k)
        f.add(Subsystem::from_bits(subset(rng)), coeff(rng));
    return f;
}

// Entropy vector indexed by subset bitmask with S_K = S_{complement K} inside
// 1..n and S_empty = S_all = 0.
inline std::vector<std::int64_t> random_pure_vector(std::mt19937_64& rng, int n)
{
    const std::uint32_t full = (1u << n) - 1;
    std::uniform_int_distribution<std::int64_t> value(0, 1000);
    std::vector<std::int64_t> h(full + 1);
    for (auto& x : h)
        x = value(rng);
    h[0] = h[full] = 0;
    std::vector<std::int64_t> s(full + 1);
    for (std::uint32_t k = 0; k <= full; ++k)
        s[k] = h[k] + h[full & ~k];
    return s;
}

inline std::vector<std::int64_t> random_vector(std::mt19937_64& rng, int n)
{
    std::uniform_int_distribution<std::int64_t> value(-1000, 1000);
    std::vector<std::int64_t> s(std::size_t{1} << n);
    for (std::size_t k = 1; k < s.size(); ++k)
        s[k] = value(rng);
    return s;
}

} // namespace hei::testing
