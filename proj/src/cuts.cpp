#include "hei/cuts.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace hei {

namespace {

int wrap(int r, int n) { return ((r - 1) % n + n) % n + 1; }

std::string two(int a, int b, int n)
{
    return n >= 10 ? std::to_string(a) + "," + std::to_string(b) : std::to_string(a) + std::to_string(b);
}

} // namespace

Arc Arc::from_set(Subsystem s, int n)
{
    if (s.empty() || s == Subsystem::all(n) || !Subsystem::all(n).contains(s))
        throw Error("arc must be a proper non-empty subset of 1.." + std::to_string(n));
    int start = 0, end = 0, starts = 0;
    for (int r : s.members()) {
        if (!s.contains(wrap(r - 1, n))) {
            start = r;
            ++starts;
        }
        if (!s.contains(wrap(r + 1, n)))
            end = r;
    }
    if (starts != 1)
        throw Error(s.label() + " is not a cyclic arc of 1.." + std::to_string(n));
    return Arc{start, end, n};
}

Subsystem Arc::set() const
{
    Subsystem s;
    for (int r = start;; r = wrap(r + 1, n)) {
        s = s.with(r);
        if (r == end)
            break;
    }
    return s;
}

int Arc::length() const { return (end - start + n) % n + 1; }

Cut Cut::from_arcs(Subsystem a, Subsystem b, int n)
{
    if (n < 2)
        throw Error("cuts need n >= 2");
    if (a.intersects(b))
        throw Error("cut arcs overlap");
    Arc x = Arc::from_set(a, n), y = Arc::from_set(b, n);
    if (y.start < x.start)
        std::swap(x, y);
    return Cut(x, y);
}

Cut Cut::from_indices(int i, int l, int k, int j, int n)
{
    for (int r : {i, l, k, j})
        if (r < 1 || r > n)
            throw Error("cut index out of range");
    Arc a{i, j, n}, b{k, l, n};
    return from_arcs(a.set(), b.set(), n);
}

std::string Cut::label() const
{
    return "C^{" + two(a_.start, b_.end, n()) + "}_{" + two(b_.start, a_.end, n()) + "}";
}

std::vector<Cut> enumerate_cuts(int n)
{
    if (n < 2)
        throw Error("enumerate_cuts needs n >= 2");
    if (n > kMaxRegions)
        throw Error("too many regions");
    std::vector<Subsystem> arcs;
    for (int s = 1; s <= n; ++s)
        for (int len = 1; len < n; ++len)
            arcs.push_back(Arc{s, wrap(s + len - 1, n), n}.set());
    std::vector<Cut> out;
    for (std::size_t x = 0; x < arcs.size(); ++x)
        for (std::size_t y = 0; y < arcs.size(); ++y)
            if (!arcs[x].intersects(arcs[y]) && Arc::from_set(arcs[x], n).start < Arc::from_set(arcs[y], n).start)
                out.push_back(Cut::from_arcs(arcs[x], arcs[y], n));
    auto key = [](const Cut& c) {
        return std::tuple{c.level(), c.first().start, c.first().length(), c.second().start, c.second().length()};
    };
    std::sort(out.begin(), out.end(), [&](const Cut& a, const Cut& b) { return key(a) < key(b); });
    return out;
}

std::uint64_t cut_count_formula(int n)
{
    std::uint64_t m = static_cast<std::uint64_t>(n);
    return m * m * (m * m - 1) / 12;
}

bool induces(const Cut& c, const Cut& c2)
{
    Subsystem a = c.first().set(), b = c.second().set();
    Subsystem x = c2.first().set(), y = c2.second().set();
    return (a.contains(x) && b.contains(y)) || (a.contains(y) && b.contains(x));
}

bool cuts_cross(const Cut& p, const Cut& q)
{
    Subsystem a = p.first().set(), b = p.second().set();
    Subsystem x = q.first().set(), y = q.second().set();
    return a.intersects(x) && a.intersects(y) && b.intersects(x) && b.intersects(y);
}

std::optional<std::pair<Subsystem, Subsystem>> apply_cut_to_surface(Subsystem cluster, const Cut& c)
{
    Subsystem a = c.first().set(), b = c.second().set();
    if (!(a | b).contains(cluster) || !cluster.intersects(a) || !cluster.intersects(b))
        return std::nullopt;
    return std::pair{cluster & a, cluster & b};
}

ChordInequality cut_constraint(Subsystem cluster, const Cut& c)
{
    auto parts = apply_cut_to_surface(cluster, c);
    if (!parts)
        throw Error("cut " + c.label() + " does not split " + cluster.label());
    ChordInequality out{connected_expansion(cluster), connected_expansion(parts->first) + connected_expansion(parts->second)};
    cancel_common(out.red, out.blue);
    return out;
}

std::vector<CutCorrection> cut_corrections(const EntropyForm& form, const Cut& c)
{
    EntropyForm f = s_to_i(form);
    if (c.n() != f.n())
        throw Error("cut and form disagree on n");
    Subsystem a = c.first().set(), b = c.second().set();
    std::vector<CutCorrection> out;
    for_each_subset(a, [&](Subsystem i) {
        for_each_subset(b, [&](Subsystem j) {
            // Every I_K with K containing I and J contributes, including K
            // that reach further into either arc.
            const Subsystem rest = Subsystem::all(f.n()) - (i | j);
            std::int64_t sum = f.coefficient(i | j);
            for_each_subset(rest, [&](Subsystem k) { sum += f.coefficient(i | j | k); });
            if (sum == 0)
                return;
            std::int64_t sign = ((i.size() + j.size() + 1) % 2 == 0) ? 1 : -1;
            out.push_back({i, j, sign * sum});
        });
    });
    return out;
}

EntropyForm apply_cut_to_iform(const EntropyForm& form, const Cut& c)
{
    EntropyForm out = s_to_i(form);
    for (const CutCorrection& q : cut_corrections(out, c)) {
        Subsystem blocks[2] = {q.in_first, q.in_second};
        out += group_regions(blocks, out.n()) * q.coefficient;
    }
    return out;
}

std::vector<int> CutDag::level_histogram() const
{
    std::vector<int> h(std::max(n, 1), 0);
    for (const Cut& c : nodes)
        ++h[c.level()];
    return h;
}

std::vector<bool> CutDag::reachable_from(int u) const
{
    std::vector<bool> seen(nodes.size(), false);
    std::vector<int> stack{u};
    seen[u] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : edges[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

bool CutDag::acyclic() const
{
    std::vector<int> indeg(nodes.size(), 0);
    for (const auto& out : edges)
        for (int w : out)
            ++indeg[w];
    std::vector<int> ready;
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (!indeg[v])
            ready.push_back(static_cast<int>(v));
    std::size_t done = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++done;
        for (int w : edges[v])
            if (--indeg[w] == 0)
                ready.push_back(w);
    }
    return done == nodes.size();
}

std::string CutDag::to_dot() const
{
    std::ostringstream os;
    os << "digraph cuts {\n  rankdir=TB;\n  node [shape=box, fontname=\"Helvetica\"];\n";
    for (int level = n - 1; level >= 1; --level) {
        os << "  { rank=same;";
        for (std::size_t v = 0; v < nodes.size(); ++v)
            if (nodes[v].level() == level)
                os << " c" << v << ";";
        os << " }\n";
    }
    for (std::size_t v = 0; v < nodes.size(); ++v)
        os << "  c" << v << " [label=\"" << nodes[v].label() << "\\nlevel " << nodes[v].level() << "\"];\n";
    for (std::size_t v = 0; v < nodes.size(); ++v)
        for (int w : edges[v])
            os << "  c" << v << " -> c" << w << ";\n";
    os << "}\n";
    return os.str();
}

CutDag build_cut_dag(int n)
{
    CutDag dag;
    dag.n = n;
    dag.nodes = enumerate_cuts(n);
    const std::size_t m = dag.nodes.size();
    std::vector<std::vector<bool>> ind(m, std::vector<bool>(m, false));
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            ind[u][v] = u != v && induces(dag.nodes[u], dag.nodes[v]);
    dag.edges.assign(m, {});
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v) {
            if (!ind[u][v])
                continue;
            bool covered = false;
            for (std::size_t w = 0; w < m && !covered; ++w)
                covered = ind[u][w] && ind[w][v];
            if (!covered)
                dag.edges[u].push_back(static_cast<int>(v));
        }
    return dag;
}

namespace {

// Order ideals of the induction poset restricted to a mask, optionally
// forbidding crossing pairs. Cuts are indexed by non-decreasing level, so the
// lowest set bit is minimal in what remains.
class IdealCounter {
public:
    IdealCounter(const std::vector<Cut>& cuts, bool forbid_crossing)
    {
        const std::size_t m = cuts.size();
        up_.assign(m, 0);
        conf_.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (induces(cuts[i], cuts[j]))
                    up_[j] |= std::uint64_t{1} << i;
                if (forbid_crossing && cuts_cross(cuts[i], cuts[j]))
                    conf_[i] |= std::uint64_t{1} << j;
            }
        full_ = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    }

    std::uint64_t count() { return count(full_); }

private:
    std::uint64_t count(std::uint64_t mask)
    {
        if (!mask)
            return 1;
        if (auto it = memo_.find(mask); it != memo_.end())
            return it->second;
        const int x = std::countr_zero(mask);
        std::uint64_t without = count(mask & ~up_[x]);
        std::uint64_t drop = std::uint64_t{1} << x;
        for (std::uint64_t c = conf_[x]; c; c &= c - 1)
            drop |= up_[std::countr_zero(c)];
        std::uint64_t with = count(mask & ~drop);
        std::uint64_t total = without + with;
        memo_.emplace(mask, total);
        return total;
    }

    std::vector<std::uint64_t> up_, conf_;
    std::uint64_t full_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

} // namespace

ConfigurationCount count_allowed_configurations(int n)
{
    if (n < 2)
        throw Error("count_allowed_configurations needs n >= 2");
    if (cut_count_formula(n) > 64)
        throw Error("count_allowed_configurations supports n <= 5");
    auto cuts = enumerate_cuts(n);
    ConfigurationCount r;
    r.n = n;
    r.closed_sets = IdealCounter(cuts, false).count();
    r.crossing_free = IdealCounter(cuts, true).count();
    const bool any_crossing = r.closed_sets > r.crossing_free;
    r.allowed = r.crossing_free - 1 + (any_crossing ? 1 : 0);
    r.table = {
        {"closed", "induction-closed cut sets", r.closed_sets},
        {"closed-nonempty", "non-empty induction-closed cut sets", r.closed_sets - 1},
        {"crossing-free", "induction-closed sets with no crossing pair", r.crossing_free},
        {"crossing-free-nonempty", "non-empty induction-closed sets with no crossing pair", r.crossing_free - 1},
        {"allowed", "non-empty crossing-free sets, plus one complete disconnection for all crossing sets", r.allowed},
    };
    return r;
}

} // namespace hei
