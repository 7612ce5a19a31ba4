#include "hei/certificate.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hei/text.hpp"

namespace hei {

using nlohmann::json;

namespace {

json regions_json(Subsystem s) { return s.members(); }

Subsystem regions_from(const json& j)
{
    return Subsystem::of(j.get<std::vector<int>>());
}

json form_json(const EntropyForm& f)
{
    json terms = json::array();
    for (const auto& [k, c] : f.terms())
        terms.push_back({{"regions", regions_json(k)}, {"coefficient", c}});
    return terms;
}

EntropyForm form_from(const json& j, Basis b, int n)
{
    EntropyForm f(b, n);
    for (const auto& t : j.at("terms"))
        f.add(regions_from(t.at("regions")), t.at("coefficient").get<std::int64_t>());
    return f;
}

json basis_form_json(const EntropyForm& f)
{
    return {{"text", render_inequality(f)}, {"terms", form_json(f)}};
}

json split_json(const Split& s)
{
    json clusters = json::array();
    for (Subsystem c : s.clusters)
        clusters.push_back(regions_json(c));
    return {{"whole", regions_json(s.whole)}, {"clusters", clusters}, {"label", s.label()}};
}

Split split_from(const json& j)
{
    Split s;
    s.whole = regions_from(j.at("whole"));
    for (const auto& c : j.at("clusters"))
        s.clusters.push_back(regions_from(c));
    s.clusters = normalize_partition(s.clusters, s.whole);
    return s;
}

json chords_json(const ChordMultiset& m)
{
    json out = json::array();
    for (const Chord& c : m.flatten())
        out.push_back(c.label());
    return out;
}

ChordMultiset chords_from(const json& j)
{
    ChordMultiset m;
    for (const auto& c : j)
        m.add(Chord::parse(c.get<std::string>()));
    return m;
}

json step_json(const ProofStep& s)
{
    if (const auto* c = std::get_if<CancelStep>(&s))
        return {{"type", "cancel"}, {"chord", c->chord.label()}};
    const auto& e = std::get<ExchangeStep>(s);
    json w = json::array();
    for (const Endpoint& p : e.witness)
        w.push_back(p.label());
    return {{"type", "exchange"},
            {"removed", {e.removed[0].label(), e.removed[1].label()}},
            {"inserted", {e.inserted[0].label(), e.inserted[1].label()}},
            {"witness", w}};
}

ProofStep step_from(const json& j)
{
    const std::string type = j.at("type").get<std::string>();
    if (type == "cancel")
        return CancelStep{Chord::parse(j.at("chord").get<std::string>())};
    if (type != "exchange")
        throw Error("unknown step type '" + type + "'");
    auto chord = [](const json& x) { return Chord::parse(x.get<std::string>()); };
    const auto& r = j.at("removed");
    const auto& i = j.at("inserted");
    const auto& w = j.at("witness");
    if (r.size() != 2 || i.size() != 2 || w.size() != 4)
        throw Error("exchange step needs 2 removed, 2 inserted chords and 4 witness endpoints");
    return ExchangeStep{{chord(r[0]), chord(r[1])},
                        {chord(i[0]), chord(i[1])},
                        {Endpoint::parse(w[0].get<std::string>()), Endpoint::parse(w[1].get<std::string>()),
                         Endpoint::parse(w[2].get<std::string>()), Endpoint::parse(w[3].get<std::string>())}};
}

ProofStatus status_from(const std::string& s)
{
    if (s == "Proved")
        return ProofStatus::Proved;
    if (s == "NotProved")
        return ProofStatus::NotProved;
    if (s == "NumericallyRefuted")
        return ProofStatus::NumericallyRefuted;
    throw Error("unknown proof status '" + s + "'");
}

BalanceClass balance_from(const std::string& s)
{
    for (BalanceClass b : {BalanceClass::Unbalanced, BalanceClass::Balanced, BalanceClass::Superbalanced})
        if (s == to_string(b))
            return b;
    throw Error("unknown balance class '" + s + "'");
}

} // namespace

std::string certificate_to_json(const ProofCertificate& cert, int indent)
{
    json j;
    j["schema_version"] = kCertificateSchemaVersion;
    j["input"] = {{"n", cert.input_s.n()}, {"text", render_inequality(cert.input_s)}};
    j["basis_forms"] = {{"S", basis_form_json(cert.input_s)}, {"I", basis_form_json(cert.input_i)}};
    j["balance"] = to_string(cert.balance);

    json steps = json::array();
    for (const JointStep& js : cert.joint.steps)
        steps.push_back({{"n", js.joint.n()},
                         {"region", js.region},
                         {"original_region", js.original_region},
                         {"joint_form", basis_form_json(js.joint)},
                         {"labels", js.labels}});
    j["joint_trace"] = {{"applied", cert.joint.applied()}, {"reason", cert.joint.reason}, {"steps", steps}};

    j["working"] = {{"n", cert.working.n()}, {"labels", cert.labels}, {"form", basis_form_json(cert.working)}};

    json cccs = json::array();
    for (std::size_t k = 0; k < cert.configurations.size(); ++k) {
        const auto& cp = cert.configurations[k];
        json gens = json::array(), closure = json::array();
        for (const Split& g : cp.ccc.generators)
            gens.push_back(split_json(g));
        for (const auto& [whole, p] : cp.ccc.closure)
            closure.push_back(split_json(Split{whole, p}));
        json steps = json::array();
        for (const ProofStep& s : cp.result.steps)
            steps.push_back(step_json(s));
        json gaps = json::array();
        for (int g : cp.diagram.gap_closed)
            gaps.push_back(g);
        json entry = {
            {"index", k + 1},
            {"generators", gens},
            {"closure", closure},
            {"diagram", {{"red", chords_json(cp.diagram.red)}, {"blue", chords_json(cp.diagram.blue)}, {"gap_closed", gaps}}},
            {"gapless", cp.gapless},
            {"status", to_string(cp.result.status)},
            {"exchanges", cp.result.exchanges()},
            {"states_explored", cp.result.states_explored},
            {"note", cp.result.note},
            {"steps", steps},
        };
        entry["duplicate_of"] = cp.duplicate_of ? json(*cp.duplicate_of + 1) : json(nullptr);
        cccs.push_back(entry);
    }
    j["ccc"] = cccs;
    j["verdict"] = to_string(cert.verdict);
    j["meta"] = {{"seed", cert.seed}, {"budget", cert.budget}, {"version", cert.version}, {"term_universe", cert.term_universe}};
    return j.dump(indent);
}

ProofCertificate certificate_from_json(std::string_view text)
{
    try {
        json j = json::parse(text);
        if (j.at("schema_version").get<std::string>() != kCertificateSchemaVersion)
            throw Error("unsupported certificate schema version");
        ProofCertificate cert;
        const int n = j.at("input").at("n").get<int>();
        cert.input_s = form_from(j.at("basis_forms").at("S"), Basis::S, n);
        cert.input_i = form_from(j.at("basis_forms").at("I"), Basis::I, n);
        cert.balance = balance_from(j.at("balance").get<std::string>());

        const json& jt = j.at("joint_trace");
        cert.joint.reason = jt.at("reason").get<std::string>();
        for (const auto& st : jt.at("steps")) {
            JointStep js;
            js.region = st.at("region").get<int>();
            js.original_region = st.at("original_region").get<int>();
            js.joint = form_from(st.at("joint_form"), Basis::I, st.at("n").get<int>());
            js.labels = st.at("labels").get<std::vector<int>>();
            cert.joint.steps.push_back(std::move(js));
        }
        if (jt.at("applied").get<bool>() != cert.joint.applied())
            throw Error("joint_trace.applied disagrees with its steps");

        const json& w = j.at("working");
        cert.working = form_from(w.at("form"), Basis::S, w.at("n").get<int>());
        cert.labels = w.at("labels").get<std::vector<int>>();

        for (const auto& e : j.at("ccc")) {
            ConfigurationProof cp;
            for (const auto& g : e.at("generators"))
                cp.ccc.generators.push_back(split_from(g));
            for (const auto& c : e.at("closure")) {
                Split s = split_from(c);
                cp.ccc.closure[s.whole] = s.clusters;
            }
            const json& d = e.at("diagram");
            cp.diagram.n = cert.working.n();
            cp.diagram.red = chords_from(d.at("red"));
            cp.diagram.blue = chords_from(d.at("blue"));
            for (const auto& g : d.at("gap_closed"))
                cp.diagram.gap_closed.insert(g.get<int>());
            cp.gapless = e.at("gapless").get<bool>();
            cp.result.status = status_from(e.at("status").get<std::string>());
            cp.result.states_explored = e.at("states_explored").get<std::size_t>();
            cp.result.note = e.at("note").get<std::string>();
            for (const auto& s : e.at("steps"))
                cp.result.steps.push_back(step_from(s));
            if (!e.at("duplicate_of").is_null()) {
                auto ref = e.at("duplicate_of").get<std::size_t>();
                if (ref < 1)
                    throw Error("duplicate_of must be a 1-based index");
                cp.duplicate_of = ref - 1;
            }
            cert.configurations.push_back(std::move(cp));
        }
        const std::string verdict = j.at("verdict").get<std::string>();
        if (verdict != "Proved" && verdict != "NotProved")
            throw Error("unknown verdict '" + verdict + "'");
        cert.verdict = verdict == "Proved" ? Verdict::Proved : Verdict::NotProved;
        const json& meta = j.at("meta");
        cert.seed = meta.at("seed").get<std::uint64_t>();
        cert.budget = meta.at("budget").get<std::size_t>();
        cert.version = meta.at("version").get<std::string>();
        cert.term_universe = meta.at("term_universe").get<bool>();
        return cert;
    } catch (const json::exception& e) {
        throw Error(std::string("certificate JSON: ") + e.what());
    }
}

namespace {

struct Point {
    double x, y;
};

// Endpoint p of 2n sits inside region arcs separated by small gaps.
Point endpoint_point(int position, int n, double radius, double cx, double cy)
{
    const double slot = 2 * std::numbers::pi / n;
    const int region = position / 2;
    const bool right = position % 2;
    const double theta = slot * region + slot * (right ? 0.85 : 0.15) - std::numbers::pi / 2;
    return {cx + radius * std::cos(theta), cy + radius * std::sin(theta)};
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

} // namespace

std::string diagram_to_dot(const CircularDiagram& d, std::string_view title)
{
    std::ostringstream os;
    os << "graph diagram {\n";
    os << "  label=\"" << title << "\";\n  layout=neato;\n  node [shape=point, width=0.06];\n";
    for (int p = 0; p < 2 * d.n; ++p) {
        Point pt = endpoint_point(p, d.n, 2.0, 0.0, 0.0);
        os << "  " << Endpoint::at(p).label() << " [pos=\"" << fmt(pt.x) << "," << fmt(-pt.y) << "!\", xlabel=\"" << Endpoint::at(p).label() << "\"];\n";
    }
    auto edges = [&](const ChordMultiset& m, const char* colour, const char* style) {
        for (const auto& [c, k] : m.entries()) {
            os << "  " << c.lo().label() << " -- " << c.hi().label() << " [color=" << colour << ", style=" << style;
            if (k > 1)
                os << ", label=\"x" << k << "\"";
            os << "];\n";
        }
    };
    edges(d.red, "red", "solid");
    edges(d.blue, "blue", "dashed");
    os << "}\n";
    return os.str();
}

std::string diagram_to_svg(const CircularDiagram& d, std::string_view title)
{
    const double size = 360, cx = 180, cy = 190, radius = 140;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20 << "\">\n";
    os << "  <text x=\"" << cx << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << title << "</text>\n";
    os << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
    for (int r = 0; r < d.n; ++r) {
        Point a = endpoint_point(2 * r, d.n, radius, cx, cy), b = endpoint_point(2 * r + 1, d.n, radius, cx, cy);
        os << "  <path d=\"M " << fmt(a.x) << " " << fmt(a.y) << " A " << radius << " " << radius << " 0 0 1 " << fmt(b.x) << " " << fmt(b.y)
           << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"4\"/>\n";
        Point m = endpoint_point(2 * r, d.n, radius + 18, cx, cy), m2 = endpoint_point(2 * r + 1, d.n, radius + 18, cx, cy);
        os << "  <text x=\"" << fmt((m.x + m2.x) / 2) << "\" y=\"" << fmt((m.y + m2.y) / 2 + 4) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">A"
           << r + 1 << "</text>\n";
    }
    auto chords = [&](const ChordMultiset& m, const char* colour, const char* dash) {
        for (const auto& [c, k] : m.entries()) {
            Point a = endpoint_point(c.lo().position(), d.n, radius, cx, cy), b = endpoint_point(c.hi().position(), d.n, radius, cx, cy);
            os << "  <path d=\"M " << fmt(a.x) << " " << fmt(a.y) << " Q " << fmt(cx) << " " << fmt(cy) << " " << fmt(b.x) << " " << fmt(b.y)
               << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << 1.5 * k << "\"" << dash << "><title>" << c.label() << "</title></path>\n";
        }
    };
    chords(d.red, "#c0392b", "");
    chords(d.blue, "#2471a3", " stroke-dasharray=\"6 4\"");
    os << "</svg>\n";
    return os.str();
}

} // namespace hei
