#include "hei/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <unordered_set>

namespace hei {

CircularDiagram make_diagram(int n, ChordMultiset red, ChordMultiset blue)
{
    if (n < 1 || n > kMaxRegions)
        throw Error("diagram region count out of range");
    for (const auto* side : {&red, &blue})
        for (const auto& [c, k] : side->entries())
            if (c.hi().region > n)
                throw Error("chord " + c.label() + " outside n=" + std::to_string(n));
    cancel_common(red, blue);
    return CircularDiagram{n, std::move(red), std::move(blue), {}};
}

CircularDiagram make_diagram(int n, const ChordInequality& ineq) { return make_diagram(n, ineq.red, ineq.blue); }

CircularDiagram with_constraint(const CircularDiagram& d, const ChordInequality& constraint)
{
    CircularDiagram out = make_diagram(d.n, d.red + constraint.blue, d.blue + constraint.red);
    out.gap_closed = d.gap_closed;
    return out;
}

namespace {

// Endpoint classes after identifying R_j ~ L_{j+1} for closed gaps j.
std::vector<int> endpoint_classes(int n, const std::set<int>& closed)
{
    const int m = 2 * n;
    std::vector<int> cls(m);
    for (int p = 0; p < m; ++p)
        cls[p] = p;
    for (int j : closed) {
        if (j < 1 || j > n)
            throw Error("gap index out of range");
        int r = 2 * (j - 1) + 1;
        int l = (r + 1) % m;
        int a = cls[r], b = cls[l];
        int lo = std::min(a, b), hi = std::max(a, b);
        for (int& c : cls)
            if (c == hi)
                c = lo;
    }
    // Renumber in circular order.
    std::vector<int> order;
    for (int c : cls)
        if (std::find(order.begin(), order.end(), c) == order.end())
            order.push_back(c);
    std::sort(order.begin(), order.end());
    for (int& c : cls)
        c = static_cast<int>(std::find(order.begin(), order.end(), c) - order.begin());
    return cls;
}

} // namespace

CircularDiagram close_gaps(const CircularDiagram& d, const std::set<int>& gaps)
{
    std::set<int> closed = d.gap_closed;
    closed.insert(gaps.begin(), gaps.end());
    auto cls = endpoint_classes(d.n, closed);
    auto key = [&](const Chord& c) {
        int a = cls[c.lo().position()], b = cls[c.hi().position()];
        return std::pair{std::min(a, b), std::max(a, b)};
    };
    std::vector<Chord> red, blue;
    for (const Chord& c : d.red.flatten())
        if (key(c).first != key(c).second)
            red.push_back(c);
    for (const Chord& c : d.blue.flatten())
        if (key(c).first != key(c).second)
            blue.push_back(c);
    std::vector<bool> used(blue.size(), false);
    ChordMultiset r, b;
    for (const Chord& c : red) {
        bool matched = false;
        for (std::size_t k = 0; k < blue.size() && !matched; ++k) {
            if (!used[k] && key(blue[k]) == key(c)) {
                used[k] = true;
                matched = true;
            }
        }
        if (!matched)
            r.add(c);
    }
    for (std::size_t k = 0; k < blue.size(); ++k)
        if (!used[k])
            b.add(blue[k]);
    return CircularDiagram{d.n, std::move(r), std::move(b), std::move(closed)};
}

bool chords_cross(const Chord& a, const Chord& b)
{
    int p = a.lo().position(), q = a.hi().position();
    int r = b.lo().position(), s = b.hi().position();
    if (p == r || p == s || q == r || q == s)
        return false;
    return (p < r && r < q && q < s) || (r < p && p < s && s < q);
}

std::pair<Chord, Chord> cross_exchange(const Chord& a, const Chord& b, Repairing choice)
{
    if (!chords_cross(a, b))
        throw Error("cross_exchange on non-crossing chords " + a.label() + ", " + b.label());
    std::array<Endpoint, 4> e{a.lo(), a.hi(), b.lo(), b.hi()};
    std::sort(e.begin(), e.end());
    if (choice == Repairing::A)
        return {Chord::between(e[0], e[1]), Chord::between(e[2], e[3])};
    return {Chord::between(e[0], e[3]), Chord::between(e[1], e[2])};
}

bool is_gapless(const CircularDiagram& d)
{
    for (const auto* side : {&d.red, &d.blue})
        for (const auto& [c, k] : side->entries())
            if (c.is_gap_chord(d.n) && !d.gap_closed.contains(c.indices().second))
                return false;
    return true;
}

bool degrees_balanced(const CircularDiagram& d) { return d.red.endpoint_degrees() == d.blue.endpoint_degrees(); }

const char* to_string(ProofStatus s)
{
    switch (s) {
    case ProofStatus::Proved: return "Proved";
    case ProofStatus::NotProved: return "NotProved";
    case ProofStatus::NumericallyRefuted: return "NumericallyRefuted";
    }
    return "?";
}

int ProofResult::exchanges() const
{
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const ProofStep& s) { return std::holds_alternative<ExchangeStep>(s); }));
}

std::size_t default_budget(const CircularDiagram& d)
{
    std::size_t x = static_cast<std::size_t>(d.red.size()) * 2 * static_cast<std::size_t>(d.n);
    return std::max<std::size_t>(x * x, 16);
}

namespace {

using Code = std::uint16_t;

Code encode(const Chord& c) { return static_cast<Code>(c.lo().position() * 64 + c.hi().position()); }
Chord decode(Code k) { return Chord::between(Endpoint::at(k / 64), Endpoint::at(k % 64)); }

bool codes_cross(Code a, Code b)
{
    int p = a / 64, q = a % 64, r = b / 64, s = b % 64;
    if (p == r || p == s || q == r || q == s)
        return false;
    return (p < r && r < q && q < s) || (r < p && p < s && s < q);
}

struct State {
    std::vector<Code> red; // sorted, with repeats
    std::vector<Code> blue;

    std::string key() const
    {
        std::string k;
        k.reserve(2 * (red.size() + blue.size()) + 1);
        for (Code c : red) {
            k.push_back(static_cast<char>(c >> 8));
            k.push_back(static_cast<char>(c & 0xff));
        }
        k.push_back('|');
        for (Code c : blue) {
            k.push_back(static_cast<char>(c >> 8));
            k.push_back(static_cast<char>(c & 0xff));
        }
        return k;
    }
};

struct Node {
    State state;
    int parent;
    std::vector<ProofStep> steps; // steps leading here from parent
    int g;
};

bool erase_one(std::vector<Code>& v, Code c)
{
    auto it = std::lower_bound(v.begin(), v.end(), c);
    if (it == v.end() || *it != c)
        return false;
    v.erase(it);
    return true;
}

void insert_sorted(std::vector<Code>& v, Code c) { v.insert(std::upper_bound(v.begin(), v.end(), c), c); }

// A red chord no other red chord crosses can never be crossed later: a
// re-pairing never increases the number of crossings with a third chord.
bool dead(const State& s)
{
    for (std::size_t i = 0; i < s.red.size(); ++i) {
        bool crossed = false;
        for (std::size_t j = 0; j < s.red.size() && !crossed; ++j)
            crossed = codes_cross(s.red[i], s.red[j]);
        if (!crossed)
            return true;
    }
    return false;
}

struct Move {
    State next;
    std::vector<ProofStep> steps;
    int gap_chords;
    int cancelled;
    int choice;
};

} // namespace

ProofResult clean_gap_prove(const CircularDiagram& d, const SearchOptions& opts)
{
    ProofResult result;
    if (!degrees_balanced(d)) {
        result.note = "endpoint degrees of red and blue differ";
        return result;
    }
    const std::size_t budget = opts.budget ? opts.budget : default_budget(d);

    std::vector<ProofStep> initial;
    State start;
    {
        ChordMultiset r = d.red, b = d.blue;
        for (const auto& [c, k] : cancel_common(r, b).entries())
            for (int t = 0; t < k; ++t)
                initial.push_back(CancelStep{c});
        for (const Chord& c : r.flatten())
            start.red.push_back(encode(c));
        for (const Chord& c : b.flatten())
            start.blue.push_back(encode(c));
        std::sort(start.red.begin(), start.red.end());
        std::sort(start.blue.begin(), start.blue.end());
    }

    auto finish = [&](const std::vector<Node>& nodes, int at) {
        std::vector<ProofStep> out = initial;
        std::vector<int> path;
        for (int k = at; k >= 0; k = nodes[k].parent)
            path.push_back(k);
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            out.insert(out.end(), nodes[*it].steps.begin(), nodes[*it].steps.end());
        return out;
    };

    if (start.red.empty() && start.blue.empty()) {
        result.status = ProofStatus::Proved;
        result.steps = initial;
        return result;
    }
    if (dead(start)) {
        result.note = "a red chord is crossed by no other red chord";
        return result;
    }

    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    // (f, -g, insertion order) ascending.
    using Entry = std::tuple<int, int, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    auto h = [](const State& s) { return static_cast<int>((s.red.size() + 1) / 2); };

    nodes.push_back(Node{start, -1, {}, 0});
    seen.insert(start.key());
    open.emplace(h(start), 0, 0);

    std::size_t expanded = 0;
    while (!open.empty()) {
        auto [f, neg_g, idx] = open.top();
        open.pop();
        if (nodes[idx].state.red.empty()) {
            result.status = ProofStatus::Proved;
            result.steps = finish(nodes, static_cast<int>(idx));
            result.states_explored = expanded;
            return result;
        }
        if (++expanded > budget) {
            result.note = "search budget exhausted";
            result.states_explored = expanded;
            return result;
        }
        const State cur = nodes[idx].state;
        const int g = nodes[idx].g;

        std::vector<Move> moves;
        for (std::size_t i = 0; i < cur.red.size(); ++i) {
            if (i && cur.red[i] == cur.red[i - 1])
                continue;
            for (std::size_t j = i + 1; j < cur.red.size(); ++j) {
                if (cur.red[j] == cur.red[j - 1] && j - 1 != i)
                    continue;
                if (!codes_cross(cur.red[i], cur.red[j]))
                    continue;
                Chord a = decode(cur.red[i]), b = decode(cur.red[j]);
                std::array<Endpoint, 4> w{a.lo(), a.hi(), b.lo(), b.hi()};
                std::sort(w.begin(), w.end());
                for (int choice = 0; choice < 2; ++choice) {
                    auto [x, y] = cross_exchange(a, b, choice == 0 ? Repairing::A : Repairing::B);
                    Move m{cur, {}, 0, 0, choice};
                    erase_one(m.next.red, cur.red[i]);
                    erase_one(m.next.red, cur.red[j]);
                    m.steps.push_back(ExchangeStep{{a, b}, {x, y}, w});
                    for (const Chord& c : {x, y}) {
                        Code k = encode(c);
                        if (erase_one(m.next.blue, k)) {
                            m.steps.push_back(CancelStep{c});
                            ++m.cancelled;
                        } else {
                            insert_sorted(m.next.red, k);
                            m.gap_chords += c.is_gap_chord(d.n);
                        }
                    }
                    moves.push_back(std::move(m));
                }
            }
        }
        std::stable_sort(moves.begin(), moves.end(), [](const Move& l, const Move& r) {
            return std::tie(l.gap_chords, r.cancelled, l.choice) < std::tie(r.gap_chords, l.cancelled, r.choice);
        });
        for (Move& m : moves) {
            if (!m.next.red.empty() && dead(m.next))
                continue;
            if (!seen.insert(m.next.key()).second)
                continue;
            int ng = g + 1;
            nodes.push_back(Node{std::move(m.next), static_cast<int>(idx), std::move(m.steps), ng});
            open.emplace(ng + h(nodes.back().state), -ng, nodes.size() - 1);
        }
    }
    result.note = "search space exhausted";
    result.states_explored = expanded;
    return result;
}

ReplayReport replay(const CircularDiagram& d, const std::vector<ProofStep>& steps)
{
    ChordMultiset red = d.red, blue = d.blue;
    auto fail = [](std::size_t k, std::string msg) { return ReplayReport{false, k, std::move(msg)}; };
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (const auto* c = std::get_if<CancelStep>(&steps[k])) {
            if (!red.contains(c->chord) || !blue.contains(c->chord))
                return fail(k, "cancelled chord " + c->chord.label() + " not on both sides");
            red.remove(c->chord);
            blue.remove(c->chord);
            continue;
        }
        const auto& e = std::get<ExchangeStep>(steps[k]);
        const Chord &a = e.removed[0], &b = e.removed[1];
        if (a == b ? red.count(a) < 2 : (!red.contains(a) || !red.contains(b)))
            return fail(k, "removed chords not present on the red side");
        if (!chords_cross(a, b))
            return fail(k, "removed chords " + a.label() + ", " + b.label() + " do not cross");
        std::array<Endpoint, 4> w{a.lo(), a.hi(), b.lo(), b.hi()};
        std::sort(w.begin(), w.end());
        if (w != e.witness)
            return fail(k, "crossing witness does not match removed endpoints");
        auto pa = cross_exchange(a, b, Repairing::A);
        auto pb = cross_exchange(a, b, Repairing::B);
        auto same = [&](const std::pair<Chord, Chord>& p) {
            return (p.first == e.inserted[0] && p.second == e.inserted[1]) || (p.first == e.inserted[1] && p.second == e.inserted[0]);
        };
        if (!same(pa) && !same(pb))
            return fail(k, "inserted chords are not a non-crossing re-pairing");
        red.remove(a);
        red.remove(b);
        red.add(e.inserted[0]);
        red.add(e.inserted[1]);
    }
    if (!red.empty() || !blue.empty())
        return ReplayReport{false, steps.size(), "final red " + red.to_string() + " differs from blue " + blue.to_string()};
    return {};
}

double geodesic_length(double theta_a, double theta_b, double regulator)
{
    double s = std::abs(std::sin((theta_a - theta_b) / 2.0));
    return 2.0 * std::log(2.0 * s / regulator);
}

OracleVerdict numeric_oracle(const CircularDiagram& d, std::size_t samples, std::uint64_t seed, const OracleOptions& opts)
{
    if (samples < 1)
        throw Error("numeric_oracle needs at least one sample");
    OracleVerdict v;
    const auto cls = endpoint_classes(d.n, d.gap_closed);
    const int points = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
    for (const auto* side : {&d.red, &d.blue})
        for (const auto& [c, k] : side->entries())
            if (cls[c.lo().position()] == cls[c.hi().position()])
                throw Error("chord " + c.label() + " degenerates under gap closure");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(points);
    v.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        while (true) {
            for (double& t : theta)
                t = unif(rng);
            std::sort(theta.begin(), theta.end());
            double gap = 2.0 * std::numbers::pi - (theta.back() - theta.front());
            for (int k = 1; k < points; ++k)
                gap = std::min(gap, theta[k] - theta[k - 1]);
            if (gap > 1e-9)
                break;
        }
        double red = 0, blue = 0, scale = 0;
        auto len = [&](const Chord& c) {
            return geodesic_length(theta[cls[c.lo().position()]], theta[cls[c.hi().position()]], opts.regulator);
        };
        for (const auto& [c, k] : d.red.entries()) {
            double l = len(c);
            red += k * l;
            scale += k * std::abs(l);
        }
        for (const auto& [c, k] : d.blue.entries()) {
            double l = len(c);
            blue += k * l;
            scale += k * std::abs(l);
        }
        ++v.samples;
        double margin = scale > 0 ? (red - blue) / scale : 0.0;
        v.worst_margin = std::min(v.worst_margin, margin);
        if (red - blue < -opts.tolerance * scale) {
            v.counterexample = true;
            v.witness_angles = theta;
            return v;
        }
    }
    return v;
}

OracleVerdict oracle_check_exchange(const ExchangeStep& step, int n, std::size_t samples, std::uint64_t seed, const OracleOptions& opts)
{
    CircularDiagram d;
    d.n = n;
    d.red.add(step.removed[0]);
    d.red.add(step.removed[1]);
    d.blue.add(step.inserted[0]);
    d.blue.add(step.inserted[1]);
    return numeric_oracle(d, samples, seed, opts);
}

} // namespace hei
