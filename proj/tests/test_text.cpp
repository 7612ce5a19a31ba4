#include <doctest.h>

#include <random>

#include "hei/text.hpp"
#include "support.hpp"

using namespace hei;

namespace {

std::size_t error_offset(const char* text)
{
    try {
        parse_inequality(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    return std::string::npos;
}

} // namespace

TEST_CASE("parses the reference inequalities")
{
    EntropyForm ssa = parse_inequality("S(1,2)+S(2,3) >= S(1,2,3)+S(2)");
    CHECK(ssa.basis() == Basis::S);
    CHECK(ssa.n() == 3);
    CHECK(ssa.coefficient(Subsystem::of({1, 2})) == 1);
    CHECK(ssa.coefficient(Subsystem::of({2})) == -1);

    EntropyForm mmi = parse_inequality("-I(1,2,3) >= 0");
    CHECK(mmi.basis() == Basis::I);
    CHECK(mmi.size() == 1);
    CHECK(mmi.coefficient(Subsystem::of({1, 2, 3})) == -1);

    EntropyForm q4 = parse_inequality("2*I(1,2,3,4) - I(1,2,4) - I(1,3,4) - 2*I(2,3,4) >= 0");
    CHECK(q4.coefficient(Subsystem::of({2, 3, 4})) == -2);
    CHECK(q4.coefficient(Subsystem::of({1, 2, 3, 4})) == 2);
}

TEST_CASE("'<=' flips the sides and whitespace is ignored")
{
    CHECK(parse_inequality("S(1,2,3) + S(2) <= S(1,2) + S(2,3)") == parse_inequality("S(1,2)+S(2,3)>=S(1,2,3)+S(2)"));
    CHECK(parse_inequality("  S ( 1 , 2 ) >= S(1)+S( 2 )") == parse_inequality("S(1,2)>=S(1)+S(2)"));
}

TEST_CASE("mixed bases are converted to S")
{
    EntropyForm f = parse_inequality("I(1,2) + S(1,2) >= S(1)");
    CHECK(f.basis() == Basis::S);
    CHECK(f == parse_inequality("S(2) >= 0"));
}

TEST_CASE("explicit n")
{
    CHECK(parse_inequality("-I(1,2,3) >= 0", 5).n() == 5);
    CHECK_THROWS_AS(parse_inequality("-I(1,2,6) >= 0", 5), ParseError);
}

TEST_CASE("render and parse round trip")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 3000; ++trial) {
        const int n = 1 + trial % 10;
        EntropyForm f = hei::testing::random_form(rng, trial % 2 ? Basis::S : Basis::I, n);
        // "0 >= 0" carries no basis, so compare in f's basis.
        REQUIRE(to_basis(parse_inequality(render_inequality(f), n), f.basis()) == f);
        if (!f.empty())
            REQUIRE(parse_inequality(render_inequality(f), n).basis() == f.basis());
    }
    CHECK(render_inequality(parse_inequality("-I(1,2,3) >= 0")) == "0 >= I(1,2,3)");
    CHECK(render_form(EntropyForm(Basis::S, 2)) == "0");
}

TEST_CASE("syntax errors carry byte offsets")
{
    CHECK(error_offset("S(1,2 >= 0") == 6);
    CHECK(error_offset("S(1,,2) >= 0") == 4);
    CHECK(error_offset("S(1,2) >= S(1) +") == 16);
    CHECK(error_offset("S(0) >= 0") == 2);
    CHECK(error_offset("S(1,1) >= 0") == 4);
    CHECK(error_offset("0*S(1) >= 0") == 0);
    CHECK(error_offset("S(1,2) S(2)") == 7);
    CHECK(error_offset("X(1) >= 0") == 0);
    CHECK(error_offset("S(1) >= S(2) >= 0") == 13);
    CHECK(error_offset("") == 0);
}
