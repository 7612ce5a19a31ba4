// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hei/compat.hpp"
#include "hei/cuts.hpp"
#include "hei/prover.hpp"
#include "hei/text.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace hei;
using hei::testing::chords;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Subsystem set(std::initializer_list<int> r) { return Subsystem::of(r); }

EntropyForm suite_form(const std::string& name)
{
    for (const auto& e : known_inequalities())
        if (e.name == name)
            return parse_inequality(e.text);
    throw Error("no suite entry " + name);
}

const std::vector<SuiteRow>& suite_rows()
{
    static const std::vector<SuiteRow> rows = known_suite();
    return rows;
}

void cut_counts(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t totals[] = {6, 20, 50};
    const std::vector<std::vector<int>> histograms = {{3, 3}, {6, 8, 6}, {10, 15, 15, 10}};
    for (int n = 3; n <= 5; ++n) {
        const std::size_t k = static_cast<std::size_t>(n - 3);
        const std::size_t count = enumerate_cuts(n).size();
        auto hist = build_cut_dag(n).level_histogram();
        std::vector<int> levels(hist.begin() + 1, hist.end());
        o.detail << " n=" << n << ":" << count;
        o.expect(count == totals[k], "cut total for n=" + std::to_string(n));
        o.expect(levels == histograms[k], "level histogram for n=" + std::to_string(n));
    }
    const double s = seconds_since(t0);
    o.detail << " (" << s << " s)";
    o.expect(s < 1.0, "runtime");
}

void allowed_counts(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t expected[] = {17, 1570, 2864048};
    std::ostringstream table;
    for (int n = 3; n <= 5; ++n) {
        ConfigurationCount c = count_allowed_configurations(n);
        o.detail << " n=" << n << ":" << c.allowed;
        o.expect(c.allowed == expected[n - 3], "allowed count for n=" + std::to_string(n));
        for (const auto& row : c.table)
            table << "      n=" << n << "  " << row.name << " = " << row.value << "  (" << row.description << ")\n";
    }
    const double s = seconds_since(t0);
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
    o.detail << " (" << s << " s, peak " << peak_mb << " MB)\n    interpretations:\n" << table.str();
    o.expect(s < 600.0, "runtime");
    o.expect(peak_mb < 4096.0, "memory");
}

void incompatibility(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto as_set = [](const std::vector<IncompatiblePair>& pairs) {
        std::set<std::pair<Subsystem, Subsystem>> out;
        for (const auto& p : pairs)
            out.insert(std::minmax(p.x, p.y));
        return out;
    };
    auto four = as_set(incompatible_pairs(all_unions(4)));
    o.expect(four == std::set{std::pair{set({1, 3}), set({2, 4})}}, "n=4 pair");
    std::set<std::pair<Subsystem, Subsystem>> table;
    for (const auto& [x, y] : reference::incompatible5())
        table.insert(std::minmax(Subsystem::of(x), Subsystem::of(y)));
    auto five = as_set(incompatible_pairs(all_unions(5)));
    o.expect(five == table, "n=5 pairs");
    const double s = seconds_since(t0);
    o.detail << " n=4:" << four.size() << " n=5:" << five.size() << " (" << s << " s)";
    o.expect(s < 1.0, "runtime");
}

void ccc_enumeration(Outcome& o)
{
    o.expect(enumerate_ccc(4).size() == 2, "n=4 count");
    auto cccs = enumerate_ccc(5);
    o.detail << " n=4:2 n=5:" << cccs.size();
    o.expect(cccs.size() == reference::ccc5().size(), "n=5 count");
    std::set<std::size_t> matched;
    for (std::size_t k = 0; k < reference::ccc5().size(); ++k) {
        const auto& ref = reference::ccc5()[k];
        std::set<std::string> closure = ref.generators;
        closure.insert(ref.implied.begin(), ref.implied.end());
        bool found = false;
        for (std::size_t m = 0; m < cccs.size(); ++m) {
            std::set<std::string> got, gens;
            for (const auto& [whole, p] : cccs[m].closure)
                got.insert(partition_label(p, whole));
            for (const Split& g : cccs[m].generators)
                gens.insert(g.label());
            if (got == closure && gens == ref.generators) {
                found = true;
                matched.insert(m);
            }
        }
        o.expect(found, "CCC" + std::to_string(k + 1));
    }
    o.expect(matched.size() == cccs.size(), "every enumerated configuration is a reference one");
}

void expansions(Outcome& o)
{
    auto ssa = expand_inequality(suite_form("SSA"), Configuration{});
    o.expect(ssa.red == chords("[12] + [23]") && ssa.blue == chords("[13] + [22]"), "SSA");
    auto mmi = expand_inequality(i_to_s(suite_form("MMI")), Configuration{});
    o.expect(mmi.red == chords("[12] + [23] + [31]") && mmi.blue == chords("[11] + [22] + [33]"), "MMI");

    EntropyForm q2 = i_to_s(suite_form("Q2"));
    auto cccs = enumerate_ccc(5);
    int matched = 0;
    for (std::size_t k = 0; k < reference::q2_expansions().size(); ++k) {
        const auto& ref = reference::q2_expansions()[k];
        std::set<Subsystem> want;
        for (const auto& r : ref.disconnected)
            want.insert(Subsystem::of(r));
        for (const auto& c : cccs) {
            auto d = c.disconnected();
            if (std::set<Subsystem>(d.begin(), d.end()) != want)
                continue;
            CircularDiagram dia = make_diagram(5, expand_inequality(q2, c.configuration()));
            const bool ok = dia.red == chords(ref.red) && dia.blue == chords(ref.blue);
            o.expect(ok, "Q2 in CCC" + std::to_string(k + 1));
            matched += ok;
        }
    }
    o.detail << " Q2 " << matched << "/11";

    EntropyForm joint = compress_support(i_to_s(eliminate_region(suite_form("Q2"), 5)));
    o.expect(joint == parse_inequality(reference::kQ2Joint), "Q2 joint form");
    for (const auto& c : enumerate_ccc(4)) {
        CircularDiagram closed = close_gaps(make_diagram(4, expand_inequality(joint, c.configuration())), {2, 3});
        o.expect(closed.red == chords("[13] + [34]") && closed.blue == chords("[12] + [44]"), "Q2 joint diagram");
    }
}

void proof_suite(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto& rows = suite_rows();
    const double s = seconds_since(t0);
    int proved = 0;
    for (const auto& r : rows) {
        const bool ok = r.certificate.verdict == Verdict::Proved;
        proved += ok;
        o.expect(ok, r.entry.name);
    }
    o.detail << " " << proved << "/" << rows.size() << " proved (" << s << " s)";
    o.expect(rows.size() == 11, "suite size");
    o.expect(s < 60.0, "runtime");

    o.expect(eliminate_region(suite_form("Q3"), 5) == s_to_i(parse_inequality("-I(2,3,4) >= 0", 5)), "Q3 joint");
    o.expect(eliminate_region(suite_form("Q5"), 5) == eliminate_region(suite_form("Q4"), 5), "Q5 joint = Q4 joint");
    const std::vector<int> from = {1, 2, 3, 6, 7}, to = {2, 3, 4, 1, 5};
    Permutation p = Permutation::extend(from, to, 7);
    o.expect(compress_support(apply_permutation(eliminate_region(suite_form("Q7"), 5), p)) == suite_form("Q3"),
             "Q7 joint maps to Q3");
}

void soundness(Outcome& o)
{
    const OracleOptions tolerance{}; // 1e-9 relative
    std::size_t exchanges = 0;
    double worst = 1.0;
    for (const auto& r : suite_rows()) {
        const auto& cert = r.certificate;
        for (const auto& cp : cert.configurations) {
            if (cp.duplicate_of)
                continue;
            for (std::size_t s = 0; s < cp.result.steps.size(); ++s) {
                const auto* e = std::get_if<ExchangeStep>(&cp.result.steps[s]);
                if (!e)
                    continue;
                ++exchanges;
                OracleVerdict v = oracle_check_exchange(*e, cert.working.n(), 1000, 1000 + s, tolerance);
                worst = std::min(worst, v.worst_margin);
                o.expect(!v.counterexample && v.samples == 1000, r.entry.name + " exchange " + std::to_string(s));
            }
        }
        VerifyReport rep = verify_certificate(cert, VerifyOptions{.oracle_samples = 1000});
        o.expect(rep.ok, r.entry.name + " verify");
    }
    o.detail << " " << exchanges << " exchanges x 1000 samples, worst relative margin " << worst;
}

void configuration_example(Outcome& o)
{
    const int n = 4;
    EntropyForm q = parse_inequality("-I(1,2,3) - I(1,2,4) + I(1,2,3,4) >= 0");
    EntropyForm i12(Basis::I, n), i34(Basis::I, n);
    i12.add({1, 2}, 1);
    i34.add({3, 4}, 1);
    const Cut cut12 = Cut::from_indices(1, 2, 2, 1, n), cut34 = Cut::from_indices(3, 4, 4, 3, n);
    o.expect(apply_cut_to_iform(q, cut12) == q + i12, "Q + I12");
    o.expect(apply_cut_to_iform(q, cut34) == q - i34, "Q - I34");

    Configuration ccc13;
    ccc13.set(set({1, 3}), {set({1}), set({3})});
    CircularDiagram minus = make_diagram(n, expand_inequality(i_to_s(apply_cut_to_iform(q, cut34)), ccc13));
    const bool cross_only = clean_gap_prove(minus).status == ProofStatus::Proved;
    CircularDiagram constrained = with_constraint(minus, cut_constraint(set({3, 4}), cut34));
    const bool with_cut = clean_gap_prove(constrained).status == ProofStatus::Proved;
    o.detail << " Q-I34: cross inequalities " << (cross_only ? "Proved" : "NotProved") << ", with cut constraint "
             << (with_cut ? "Proved" : "NotProved");
    o.expect(!cross_only, "Q - I34 must not follow from cross inequalities alone");
    o.expect(with_cut, "Q - I34 with the cut constraint");
}

void properties(Outcome& o)
{
    std::mt19937_64 rng(20240601);
    int round_trips = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 1 + trial % 6;
        EntropyForm s = hei::testing::random_form(rng, Basis::S, n);
        EntropyForm i = hei::testing::random_form(rng, Basis::I, n);
        round_trips += i_to_s(s_to_i(s)) == s && s_to_i(i_to_s(i)) == i;
    }
    o.expect(round_trips == 10000, "basis round trip");

    // Every elimination the prover makes, on its own stage form.
    int vectors = 0, mismatches = 0;
    for (const auto& r : suite_rows()) {
        const auto& cert = r.certificate;
        std::vector<std::pair<EntropyForm, int>> stages;
        EntropyForm stage = cert.input_i;
        for (const auto& js : cert.joint.steps) {
            stages.emplace_back(stage, js.region);
            stage = compress_support(js.joint);
        }
        if (stages.empty() && classify_balance(cert.input_i) == BalanceClass::Superbalanced)
            stages.emplace_back(cert.input_i, cert.input_i.n());
        for (const auto& [form, region] : stages) {
            EntropyForm joint = eliminate_region(form, region);
            for (int t = 0; t < 1000; ++t, ++vectors) {
                auto s = hei::testing::random_pure_vector(rng, form.n());
                mismatches += evaluate(i_to_s(form), s) != evaluate(i_to_s(joint), s);
            }
        }
    }
    o.expect(mismatches == 0, "purity equivalence");

    int diagrams = 0, gapped = 0;
    std::map<int, std::vector<CccConfiguration>> cccs;
    auto check = [&](const CircularDiagram& d) {
        ++diagrams;
        gapped += !is_gapless(d);
    };
    for (const auto& r : suite_rows()) {
        const auto& cert = r.certificate;
        if (classify_balance(cert.working) == BalanceClass::Superbalanced)
            for (const auto& cp : cert.configurations)
                check(cp.diagram);
        // Enumeration over all unions does not finish for seven regions.
        const int n = cert.input_s.n();
        if (cert.balance != BalanceClass::Superbalanced || n > 6)
            continue;
        if (!cccs.contains(n))
            cccs.emplace(n, enumerate_ccc(n));
        for (const auto& c : cccs.at(n))
            check(make_diagram(n, expand_inequality(cert.input_s, c.configuration())));
    }
    o.expect(gapped == 0, "gaplessness");
    o.detail << " round trips " << round_trips << "/10000, pure vectors " << vectors << " (" << mismatches
             << " mismatches), gapless diagrams " << diagrams - gapped << "/" << diagrams;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"cut counts and level histograms", cut_counts},
        {"allowed configuration counts", allowed_counts},
        {"incompatible pairs", incompatibility},
        {"CCC enumeration", ccc_enumeration},
        {"expansion regressions", expansions},
        {"proof suite and joint reductions", proof_suite},
        {"certificate soundness", soundness},
        {"configuration example", configuration_example},
        {"property suites", properties},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        failures += !o.pass;
        std::printf("%s %zu %s:%s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.str().c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
