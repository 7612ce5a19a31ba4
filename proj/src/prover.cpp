#include "hei/prover.hpp"

#include <chrono>
#include <algorithm>
#include <future>
#include <map>

#include "hei/text.hpp"

namespace hei {

const char* to_string(Verdict v) { return v == Verdict::Proved ? "Proved" : "NotProved"; }

int ProofCertificate::total_exchanges() const
{
    int total = 0;
    for (const auto& c : configurations)
        if (!c.duplicate_of)
            total += c.result.exchanges();
    return total;
}

std::size_t ProofCertificate::distinct_diagrams() const
{
    std::size_t k = 0;
    for (const auto& c : configurations)
        k += !c.duplicate_of;
    return k;
}

std::optional<int> choose_elimination_region(const EntropyForm& form)
{
    EntropyForm f = s_to_i(form);
    std::optional<int> best;
    int best_support = 0;
    for (int r : f.support().members()) {
        EntropyForm j = eliminate_region(f, r);
        if (j.empty())
            continue;
        int support = j.support().size();
        if (!best || support <= best_support) {
            best = r;
            best_support = support;
        }
    }
    return best;
}

namespace {

constexpr std::size_t kRefutationSamples = 200;

ProofResult prove_diagram(const CircularDiagram& d, const ProveOptions& opts)
{
    ProofResult r = clean_gap_prove(d, SearchOptions{opts.budget});
    if (r.status != ProofStatus::Proved) {
        OracleVerdict v = numeric_oracle(d, kRefutationSamples, opts.seed);
        if (v.counterexample) {
            r.status = ProofStatus::NumericallyRefuted;
            r.note += r.note.empty() ? "" : "; ";
            r.note += "numeric counterexample found";
        }
    }
    return r;
}

std::vector<int> identity_labels(int n)
{
    std::vector<int> l(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        l[static_cast<std::size_t>(k)] = k + 1;
    return l;
}

JointTrace reduce_joint(const EntropyForm& input_i, const std::vector<int>& explicit_regions)
{
    JointTrace trace;
    EntropyForm stage = input_i;
    std::vector<int> labels = identity_labels(input_i.n());
    for (std::size_t step = 0;; ++step) {
        const bool forced = step < explicit_regions.size();
        if (!explicit_regions.empty() && !forced) {
            trace.reason = "elimination sequence complete";
            break;
        }
        if (classify_balance(stage) != BalanceClass::Superbalanced) {
            if (forced)
                throw Error("region elimination needs a superbalanced form");
            trace.reason = "not superbalanced";
            break;
        }
        if (!forced && stage.support().size() < 4) {
            trace.reason = "fewer than four regions";
            break;
        }
        std::optional<int> region;
        if (forced) {
            auto it = std::find(labels.begin(), labels.end(), explicit_regions[step]);
            if (it == labels.end() || !stage.support().contains(static_cast<int>(it - labels.begin()) + 1))
                throw Error("region " + std::to_string(explicit_regions[step]) + " is not in the form being reduced");
            region = static_cast<int>(it - labels.begin()) + 1;
        } else {
            region = choose_elimination_region(stage);
        }
        if (!region) {
            trace.reason = "joint form vanishes for every region";
            break;
        }
        EntropyForm joint = eliminate_region(stage, *region);
        if (joint.empty()) {
            if (forced)
                throw Error("joint form vanishes for region " + std::to_string(explicit_regions[step]));
            trace.reason = "joint form vanishes for region " + std::to_string(labels[static_cast<std::size_t>(*region - 1)]);
            break;
        }
        std::vector<int> local;
        EntropyForm next = compress_support(joint, &local);
        std::vector<int> composed;
        for (int l : local)
            composed.push_back(labels[static_cast<std::size_t>(l - 1)]);
        trace.steps.push_back(JointStep{*region, labels[static_cast<std::size_t>(*region - 1)], joint, composed});
        stage = std::move(next);
        labels = std::move(composed);
    }
    return trace;
}

// Compressed S-basis form after the last joint step, with labels mapping to
// the original regions.
EntropyForm working_form(const EntropyForm& input_s, const JointTrace& trace, std::vector<int>* labels)
{
    if (!trace.applied())
        return compress_support(input_s, labels);
    const JointStep& last = trace.steps.back();
    // last.labels indexes the compressed joint form, so compress it first.
    std::vector<int> local;
    EntropyForm w = compress_support(i_to_s(compress_support(last.joint)), &local);
    labels->clear();
    for (int l : local)
        labels->push_back(last.labels[static_cast<std::size_t>(l - 1)]);
    return w;
}

std::vector<Subsystem> term_list(const EntropyForm& f)
{
    std::vector<Subsystem> t;
    for (const auto& [k, c] : f.terms())
        t.push_back(k);
    return t;
}

} // namespace

ProofCertificate prove(const EntropyForm& form, const ProveOptions& opts)
{
    ProofCertificate cert;
    cert.input_s = i_to_s(form);
    cert.input_i = s_to_i(form);
    cert.balance = classify_balance(form);
    cert.seed = opts.seed;
    cert.budget = opts.budget;
    cert.term_universe = opts.term_universe;
    if (cert.balance == BalanceClass::Unbalanced)
        throw Error("inequality is not balanced; only balanced forms can be proved");

    if (!opts.eliminate.empty() && !opts.use_joint)
        throw Error("an elimination region was given but the joint form is disabled");
    cert.joint = opts.use_joint ? reduce_joint(cert.input_i, opts.eliminate) : JointTrace{{}, "joint form disabled"};
    cert.working = working_form(cert.input_s, cert.joint, &cert.labels);
    const int wn = cert.working.n();
    const bool superbalanced = classify_balance(cert.working) == BalanceClass::Superbalanced;

    std::vector<Subsystem> terms = opts.term_universe ? term_list(cert.working) : std::vector<Subsystem>{};
    auto cccs = enumerate_ccc(wn, terms);

    std::map<std::pair<std::string, std::string>, std::size_t> first_seen;
    for (auto& ccc : cccs) {
        ConfigurationProof cp;
        cp.ccc = std::move(ccc);
        cp.diagram = make_diagram(wn, expand_inequality(cert.working, cp.ccc.configuration()));
        cp.gapless = is_gapless(cp.diagram);
        if (superbalanced && !cp.gapless)
            throw Error("internal consistency: superbalanced form gives a gapped diagram in " + cp.ccc.label());
        auto key = std::pair{cp.diagram.red.to_string(), cp.diagram.blue.to_string()};
        auto [it, fresh] = first_seen.emplace(key, cert.configurations.size());
        if (!fresh)
            cp.duplicate_of = it->second;
        cert.configurations.push_back(std::move(cp));
    }

    std::vector<std::future<ProofResult>> jobs(cert.configurations.size());
    for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
        if (cert.configurations[k].duplicate_of)
            continue;
        const CircularDiagram& d = cert.configurations[k].diagram;
        jobs[k] = std::async(opts.parallel ? std::launch::async : std::launch::deferred, prove_diagram, d, opts);
    }
    for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
        auto& cp = cert.configurations[k];
        if (cp.duplicate_of)
            continue;
        cp.result = jobs[k].get();
    }
    for (auto& cp : cert.configurations)
        if (cp.duplicate_of)
            cp.result.status = cert.configurations[*cp.duplicate_of].result.status;

    bool all = true;
    for (const auto& cp : cert.configurations)
        all &= cp.result.status == ProofStatus::Proved;
    cert.verdict = all ? Verdict::Proved : Verdict::NotProved;
    return cert;
}

ProofCertificate prove_without_joint(const EntropyForm& form, ProveOptions opts)
{
    opts.use_joint = false;
    opts.eliminate.clear();
    return prove(form, opts);
}

VerifyReport verify_certificate(const ProofCertificate& cert, const VerifyOptions& opts)
{
    VerifyReport rep;
    auto problem = [&](std::string msg) {
        rep.ok = false;
        rep.problems.push_back(std::move(msg));
    };
    try {
        if (s_to_i(cert.input_s) != cert.input_i)
            problem("input forms disagree between bases");
        if (classify_balance(cert.input_s) != cert.balance)
            problem("recorded balance class is wrong");

        EntropyForm stage = cert.input_i;
        std::vector<int> stage_labels = identity_labels(cert.input_i.n());
        for (std::size_t t = 0; t < cert.joint.steps.size(); ++t) {
            const JointStep& js = cert.joint.steps[t];
            const std::string where = "joint step " + std::to_string(t + 1) + ": ";
            if (classify_balance(stage) != BalanceClass::Superbalanced)
                problem(where + "eliminates from a form that is not superbalanced");
            if (js.region < 1 || js.region > stage.n() ||
                stage_labels[static_cast<std::size_t>(js.region - 1)] != js.original_region) {
                problem(where + "region label does not match the stage");
                break;
            }
            if (eliminate_region(stage, js.region) != js.joint) {
                problem(where + "joint form does not follow from eliminating region " + std::to_string(js.original_region));
                break;
            }
            std::vector<int> local;
            EntropyForm next = compress_support(js.joint, &local);
            std::vector<int> composed;
            for (int l : local)
                composed.push_back(stage_labels[static_cast<std::size_t>(l - 1)]);
            if (composed != js.labels)
                problem(where + "labels do not match the compressed joint form");
            stage = std::move(next);
            stage_labels = std::move(composed);
        }
        std::vector<int> labels;
        if (working_form(cert.input_s, cert.joint, &labels) != cert.working || labels != cert.labels)
            problem("working form does not match the recorded reduction");

        const int wn = cert.working.n();
        std::vector<Subsystem> terms;
        if (cert.term_universe)
            for (const auto& [k, c] : cert.working.terms())
                terms.push_back(k);
        if (enumerate_ccc(wn, terms).size() != cert.configurations.size())
            problem("configuration count differs from a fresh enumeration");

        std::vector<Subsystem> universe;
        if (terms.empty()) {
            universe = all_unions(wn);
        } else {
            for (Subsystem t : terms)
                for_each_subset(t, [&](Subsystem s) {
                    if (s.size() >= 2)
                        universe.push_back(s);
                });
        }
        const auto pairs = all_incompatible_pairs(universe);
        const bool superbalanced = classify_balance(cert.working) == BalanceClass::Superbalanced;

        bool all_proved = true;
        for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
            const auto& cp = cert.configurations[k];
            const std::string where = "configuration " + std::to_string(k + 1) + ": ";
            if (close_splits(cp.ccc.generators) != cp.ccc.closure)
                problem(where + "closure does not follow from the generators");
            for (const auto& p : pairs)
                if (!cp.ccc.closure.contains(p.x) && !cp.ccc.closure.contains(p.y))
                    problem(where + "incompatible pair " + p.x.label() + "/" + p.y.label() + " left connected");
            CircularDiagram d = make_diagram(wn, expand_inequality(cert.working, cp.ccc.configuration()));
            if (d != cp.diagram)
                problem(where + "diagram does not match the expansion");
            if (is_gapless(cp.diagram) != cp.gapless)
                problem(where + "gapless flag is wrong");
            if (superbalanced && !cp.gapless)
                problem(where + "superbalanced form with a gapped diagram");
            if (cp.duplicate_of) {
                std::size_t j = *cp.duplicate_of;
                if (j >= k || cert.configurations[j].duplicate_of)
                    problem(where + "duplicate reference must point to an earlier proved entry");
                else if (!(cert.configurations[j].diagram == cp.diagram))
                    problem(where + "duplicate reference has a different diagram");
                else
                    all_proved &= cert.configurations[j].result.status == ProofStatus::Proved;
                continue;
            }
            if (cp.result.status != ProofStatus::Proved) {
                all_proved = false;
                continue;
            }
            ReplayReport r = replay(cp.diagram, cp.result.steps);
            if (!r.ok)
                problem(where + "step " + std::to_string(r.failed_step.value_or(0)) + ": " + r.message);
            for (std::size_t s = 0; s < cp.result.steps.size(); ++s) {
                const auto* e = std::get_if<ExchangeStep>(&cp.result.steps[s]);
                if (!e || !r.ok)
                    continue;
                ++rep.exchanges_checked;
                if (!opts.run_oracle)
                    continue;
                OracleVerdict v = oracle_check_exchange(*e, wn, opts.oracle_samples, opts.seed + s);
                if (v.counterexample)
                    problem(where + "step " + std::to_string(s) + ": numeric oracle refutes the exchange");
            }
        }
        if ((cert.verdict == Verdict::Proved) != all_proved)
            problem("verdict does not match the configuration results");
    } catch (const Error& e) {
        problem(std::string("malformed certificate: ") + e.what());
    }
    return rep;
}

std::vector<SuiteEntry> known_inequalities()
{
    return {
        {"SSA", "S(1,2) + S(2,3) >= S(1,2,3) + S(2)", {}},
        {"MMI", "-I(1,2,3) >= 0", {}},
        {"I12(34)", "-I(1,2,3) - I(1,2,4) + I(1,2,3,4) >= 0", {}},
        {"Q1", "-I(1,2,4) - I(1,3,4) - I(1,3,5) - I(2,3,5) - I(2,4,5) + I(1,2,3,4) + I(1,2,3,5) + I(1,2,4,5) + I(1,3,4,5) + I(2,3,4,5) - I(1,2,3,4,5) >= 0", {}},
        {"Q2", "-I(1,2,4) - I(1,2,5) - I(1,3,5) - I(2,3,4) + I(1,2,3,4) + I(1,2,3,5) + I(1,2,4,5) >= 0", {5}},
        {"Q3", "-I(1,2,5) - I(1,3,5) - I(1,4,5) - I(2,3,4) + I(1,2,3,5) + I(1,2,4,5) + I(1,3,4,5) >= 0", {5}},
        {"Q4", "-I(1,2,3) - I(1,4,5) - I(2,3,4) - I(2,3,5) + I(1,2,3,4) + I(1,2,3,5) >= 0", {5}},
        {"Q5", "-I(1,2,3) - 2*I(1,2,5) - 2*I(1,3,4) - I(1,4,5) - I(2,3,4) - I(2,3,5) + 2*I(1,2,3,4) + 2*I(1,2,3,5) + I(1,2,4,5) + I(1,3,4,5) >= 0", {5}},
        {"Q[24]_{4,3}", "-I(1,2,3) - I(1,2,6) - I(1,5,6) - I(2,4,6) + I(1,2,3,6) + I(1,2,4,6) + I(1,2,5,6) >= 0", {6}},
        {"Q[13]_{5,3}", "-I(1,2,3) - I(1,2,5) - I(1,2,6) - I(3,5,6) - I(4,5,6) + I(1,2,3,6) + I(1,2,5,6) + I(3,4,5,6) >= 0", {6}},
        {"Q7", "-I(1,2,3) - I(1,4,5) - I(1,4,7) - I(1,5,6) - I(2,4,5) - I(2,4,7) - I(2,5,6) - I(3,4,5) - I(3,4,7) - I(3,5,6)"
               " + I(1,2,4,5) + I(1,2,4,7) + I(1,2,5,6) + I(1,3,4,5) + I(1,3,4,7) + I(1,3,5,6) + I(1,4,5,6) + I(1,4,5,7)"
               " + I(2,3,4,5) + I(2,3,4,7) + I(2,3,5,6) + I(2,4,5,6) + I(2,4,5,7) + I(3,4,5,6) + I(3,4,5,7)"
               " - I(1,2,4,5,6) - I(1,2,4,5,7) - I(1,3,4,5,6) - I(1,3,4,5,7) - I(2,3,4,5,6) - I(2,3,4,5,7) >= 0",
         {5, 7}},
    };
}

std::vector<SuiteRow> known_suite(const ProveOptions& base)
{
    std::vector<SuiteRow> rows;
    for (const SuiteEntry& e : known_inequalities()) {
        ProveOptions opts = base;
        opts.eliminate = e.eliminate;
        auto t0 = std::chrono::steady_clock::now();
        ProofCertificate cert = prove(parse_inequality(e.text), opts);
        auto t1 = std::chrono::steady_clock::now();
        rows.push_back(SuiteRow{e, std::move(cert), std::chrono::duration<double, std::milli>(t1 - t0).count()});
    }
    return rows;
}

} // namespace hei
