#include <doctest.h>

#include <bit>
#include <random>
#include <set>

#include "hei/compat.hpp"
#include "hei/cuts.hpp"
#include "hei/diagram.hpp"
#include "hei/text.hpp"
#include "support.hpp"

using namespace hei;
using hei::testing::chords;

namespace {

Subsystem set(std::initializer_list<int> r) { return Subsystem::of(r); }

// Proper non-empty cyclic intervals of 1..n.
std::vector<Subsystem> arcs(int n)
{
    std::set<Subsystem> out;
    for (int start = 1; start <= n; ++start)
        for (int len = 1; len < n; ++len) {
            Subsystem s;
            for (int t = 0; t < len; ++t)
                s = s.with((start - 1 + t) % n + 1);
            out.insert(s);
        }
    if (n == 1)
        out.insert(Subsystem::all(1));
    return {out.begin(), out.end()};
}

std::size_t brute_cut_count(int n)
{
    auto a = arcs(n);
    std::size_t count = 0;
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = x + 1; y < a.size(); ++y)
            count += !a[x].intersects(a[y]);
    return count;
}

// Order ideals of the induces relation, with and without crossing pairs,
// by direct subset enumeration.
std::pair<std::uint64_t, std::uint64_t> brute_closed_counts(int n)
{
    auto cuts = enumerate_cuts(n);
    const std::size_t m = cuts.size();
    std::vector<std::uint32_t> below(m, 0), crosses(m, 0);
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v) {
            if (u != v && induces(cuts[u], cuts[v]))
                below[u] |= 1u << v;
            if (cuts_cross(cuts[u], cuts[v]))
                crosses[u] |= 1u << v;
        }
    std::uint64_t closed = 0, crossing_free = 0;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        bool ok = true, clean = true;
        for (std::size_t u = 0; u < m && ok; ++u)
            if (s >> u & 1) {
                ok = (below[u] & ~s) == 0;
                clean &= (crosses[u] & s) == 0;
            }
        closed += ok;
        crossing_free += ok && clean;
    }
    return {closed, crossing_free};
}

// Cut action applied term by term.
EntropyForm cut_by_definition(const EntropyForm& q, const Cut& c)
{
    EntropyForm out = q;
    const Subsystem a = c.first().set(), b = c.second().set();
    for (const auto& [k, coeff] : q.terms())
        for_each_subset(k & a, [&](Subsystem i) {
            for_each_subset(k & b, [&](Subsystem j) {
                std::vector<Subsystem> blocks = {i, j};
                const int sign = (i.size() + j.size()) % 2 ? 1 : -1;
                out += group_regions(blocks, q.n()) * (sign * coeff);
            });
        });
    return out;
}

// The cut rewires S_X into S_{X∩A} + S_{X∩B} for every X inside A∪B that
// meets both arcs.
EntropyForm cut_in_s_basis(const EntropyForm& q, const Cut& c)
{
    EntropyForm s = i_to_s(q), out(Basis::S, q.n());
    for (const auto& [x, coeff] : s.terms()) {
        if (auto parts = apply_cut_to_surface(x, c)) {
            out.add(parts->first, coeff);
            out.add(parts->second, coeff);
        } else {
            out.add(x, coeff);
        }
    }
    return s_to_i(out);
}

} // namespace

TEST_CASE("cut counts and level histograms")
{
    for (int n = 2; n <= 8; ++n) {
        auto cuts = enumerate_cuts(n);
        CHECK(cuts.size() == cut_count_formula(n));
        CHECK(cuts.size() == brute_cut_count(n));
        CutDag dag = build_cut_dag(n);
        auto hist = dag.level_histogram();
        for (int level = 1; level < n; ++level)
            CHECK(hist[static_cast<std::size_t>(level)] == n * level * (n - level) / 2);
    }
    CHECK(enumerate_cuts(3).size() == 6);
    CHECK(enumerate_cuts(4).size() == 20);
    CHECK(enumerate_cuts(5).size() == 50);
    CHECK(build_cut_dag(5).level_histogram() == std::vector<int>{0, 10, 15, 15, 10});
}

TEST_CASE("cut labels")
{
    Cut c = Cut::from_indices(1, 4, 3, 2, 4);
    CHECK(c.first().set() == set({1, 2}));
    CHECK(c.second().set() == set({3, 4}));
    CHECK(c.label() == "C^{14}_{32}");
    CHECK(c.level() == 3);
    CHECK(c.upper() == Chord::full(1, 4));
    CHECK(c.lower() == Chord::full(3, 2));
    CHECK(Cut::from_arcs(set({3, 4}), set({1, 2}), 4) == c);
    CHECK_THROWS_AS(Cut::from_arcs(set({1, 3}), set({2}), 4), Error);
    CHECK_THROWS_AS(Cut::from_arcs(set({1, 2}), set({2, 3}), 4), Error);
}

TEST_CASE("induction between cuts")
{
    const int n = 4;
    CHECK(induces(Cut::from_indices(1, 4, 3, 2, n), Cut::from_indices(1, 3, 3, 2, n)));
    CHECK_FALSE(induces(Cut::from_indices(1, 3, 3, 2, n), Cut::from_indices(1, 4, 3, 2, n)));
    for (const Cut& c : enumerate_cuts(n)) {
        CHECK(induces(c, c));
        if (c.level() == 1)
            for (const Cut& other : enumerate_cuts(n))
                CHECK(induces(c, other) == (c == other));
    }
}

TEST_CASE("cut DAG structure")
{
    CutDag two = build_cut_dag(2);
    CHECK(two.nodes.size() == 1);
    CHECK(two.edges[0].empty());

    for (int n = 3; n <= 5; ++n) {
        CutDag dag = build_cut_dag(n);
        CHECK(dag.acyclic());
        for (std::size_t u = 0; u < dag.nodes.size(); ++u) {
            if (n == 3 && dag.nodes[u].level() == 2)
                CHECK_FALSE(dag.edges[u].empty());
            for (int v : dag.edges[u])
                CHECK(dag.nodes[static_cast<std::size_t>(v)].level() < dag.nodes[u].level());
            auto reach = dag.reachable_from(static_cast<int>(u));
            for (std::size_t v = 0; v < dag.nodes.size(); ++v)
                REQUIRE(reach[v] == induces(dag.nodes[u], dag.nodes[v]));
        }
    }
    CHECK(build_cut_dag(3).to_dot().starts_with("digraph"));
}

TEST_CASE("cuts on connected surfaces")
{
    const int n = 4;
    auto s1234 = apply_cut_to_surface(set({1, 2, 3, 4}), Cut::from_indices(1, 4, 3, 2, n));
    REQUIRE(s1234);
    CHECK(*s1234 == std::pair{set({1, 2}), set({3, 4})});
    auto s123 = apply_cut_to_surface(set({1, 2, 3}), Cut::from_indices(1, 3, 3, 2, n));
    REQUIRE(s123);
    CHECK(*s123 == std::pair{set({1, 2}), set({3})});
    Cut decouple2 = Cut::from_indices(2, 1, 3, 2, n);
    CHECK_FALSE(apply_cut_to_surface(set({1, 3, 4}), decouple2));
    auto s123b = apply_cut_to_surface(set({1, 2, 3}), decouple2);
    REQUIRE(s123b);
    CHECK(*s123b == std::pair{set({2}), set({1, 3})});

    ChordInequality c = cut_constraint(set({3, 4}), Cut::from_indices(3, 4, 4, 3, n));
    CHECK(c.red == chords("[34] + [43]"));
    CHECK(c.blue == chords("[33] + [44]"));
    CHECK_THROWS_AS(cut_constraint(set({1, 3}), Cut::from_indices(3, 4, 4, 3, n)), Error);
}

TEST_CASE("cut action on I-basis forms")
{
    EntropyForm q = parse_inequality("-I(1,2,3) - I(1,2,4) + I(1,2,3,4) >= 0");
    EntropyForm i12(Basis::I, 4), i34(Basis::I, 4);
    i12.add({1, 2}, 1);
    i34.add({3, 4}, 1);
    CHECK(apply_cut_to_iform(q, Cut::from_indices(1, 2, 2, 1, 4)) == q + i12);
    CHECK(apply_cut_to_iform(q, Cut::from_indices(3, 4, 4, 3, 4)) == q - i34);

    EntropyForm far = parse_inequality("-I(1,2,3) >= 0", 5);
    CHECK(apply_cut_to_iform(far, Cut::from_arcs(set({4}), set({5}), 5)) == far);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 3;
        EntropyForm f = hei::testing::random_form(rng, Basis::I, n);
        auto cuts = enumerate_cuts(n);
        const Cut& c = cuts[rng() % cuts.size()];
        REQUIRE(apply_cut_to_iform(f, c) == cut_by_definition(f, c));
        REQUIRE(apply_cut_to_iform(f, c) == cut_in_s_basis(f, c));
    }
}

TEST_CASE("a cut constraint completes a proof that cross inequalities cannot")
{
    EntropyForm q = parse_inequality("-I(1,2,3) - I(1,2,4) + I(1,2,3,4) >= 0");
    Configuration ccc13;
    ccc13.set(set({1, 3}), {set({1}), set({3})});
    auto diagram_of = [&](const EntropyForm& f) { return make_diagram(4, expand_inequality(i_to_s(f), ccc13)); };

    CircularDiagram base = diagram_of(q);
    CHECK(base.red == chords("[12] + [24] + [31]"));
    CHECK(base.blue == chords("[11] + [22] + [34]"));
    CHECK(clean_gap_prove(base).status == ProofStatus::Proved);

    CircularDiagram plus = diagram_of(apply_cut_to_iform(q, Cut::from_indices(1, 2, 2, 1, 4)));
    CHECK(plus.red == chords("[24] + [31]"));
    CHECK(plus.blue == chords("[21] + [34]"));
    CHECK(clean_gap_prove(plus).status == ProofStatus::Proved);

    Cut cut34 = Cut::from_indices(3, 4, 4, 3, 4);
    CircularDiagram minus = diagram_of(apply_cut_to_iform(q, cut34));
    CHECK(minus.red == chords("[12] + [24] + [31] + [43]"));
    CHECK(minus.blue == chords("[11] + [22] + [33] + [44]"));
    CHECK(clean_gap_prove(minus).status == ProofStatus::NotProved);

    CircularDiagram constrained = with_constraint(minus, cut_constraint(set({3, 4}), cut34));
    CHECK(constrained == base);
    CHECK(clean_gap_prove(constrained).status == ProofStatus::Proved);
}

TEST_CASE("allowed configuration counts")
{
    const std::uint64_t expected[] = {0, 0, 0, 17, 1570, 2864048};
    for (int n = 3; n <= 5; ++n) {
        ConfigurationCount c = count_allowed_configurations(n);
        CHECK(c.allowed == expected[n]);
        CHECK(c.table.size() == 5);
        if (n <= 4) {
            auto [closed, crossing_free] = brute_closed_counts(n);
            CHECK(c.closed_sets == closed);
            CHECK(c.crossing_free == crossing_free);
        }
    }
    CHECK_THROWS_AS(count_allowed_configurations(6), Error);
}
