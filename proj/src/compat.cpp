#include "hei/compat.hpp"

#include <algorithm>
#include <set>

namespace hei {

int interlace_count(Subsystem x, Subsystem y)
{
    if (x.intersects(y))
        throw Error("interlace_count on overlapping subsystems " + x.label() + ", " + y.label());
    if (x.empty() || y.empty())
        return 0;
    auto m = (x | y).members();
    int runs = 0;
    for (std::size_t t = 0; t < m.size(); ++t) {
        bool here = x.contains(m[t]);
        bool prev = x.contains(m[(t + m.size() - 1) % m.size()]);
        runs += here && !prev;
    }
    return runs;
}

bool is_incompatible(Subsystem x, Subsystem y)
{
    return !x.intersects(y) && interlace_count(x, y) >= 2;
}

std::vector<IncompatiblePair> all_incompatible_pairs(std::span<const Subsystem> terms)
{
    std::vector<Subsystem> t(terms.begin(), terms.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<IncompatiblePair> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (is_incompatible(t[i], t[j]))
                out.push_back({t[i], t[j]});
    return out;
}

std::vector<IncompatiblePair> incompatible_pairs(std::span<const Subsystem> terms)
{
    auto all = all_incompatible_pairs(terms);
    auto below = [](const IncompatiblePair& a, const IncompatiblePair& b) {
        return (b.x.contains(a.x) && b.y.contains(a.y)) || (b.x.contains(a.y) && b.y.contains(a.x));
    };
    std::vector<IncompatiblePair> out;
    for (const auto& p : all) {
        bool dominated = std::any_of(all.begin(), all.end(), [&](const IncompatiblePair& q) { return !(q == p) && below(p, q); });
        if (!dominated)
            out.push_back(p);
    }
    return out;
}

std::vector<Subsystem> all_unions(int n)
{
    std::vector<Subsystem> out;
    for_each_subset(Subsystem::all(n), [&](Subsystem s) {
        if (s.size() >= 2)
            out.push_back(s);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::string Split::label() const { return partition_label(clusters, whole); }

namespace {

Partition restrict_partition(const Partition& p, Subsystem sub)
{
    Partition out;
    for (Subsystem c : p)
        if (Subsystem r = c & sub; !r.empty())
            out.push_back(r);
    return out;
}

// Breaks a cluster that is not contiguous inside whole into its runs.
void split_into_runs(Subsystem cluster, Subsystem whole, Partition& out)
{
    auto m = whole.members();
    const std::size_t k = m.size();
    std::size_t first = 0;
    while (first < k && !(cluster.contains(m[first]) && !cluster.contains(m[(first + k - 1) % k])))
        ++first;
    if (first == k) {
        out.push_back(cluster);
        return;
    }
    Subsystem run;
    for (std::size_t t = 0; t < k; ++t) {
        int r = m[(first + t) % k];
        if (cluster.contains(r)) {
            run = run.with(r);
        } else if (!run.empty()) {
            out.push_back(run);
            run = {};
        }
    }
    if (!run.empty())
        out.push_back(run);
}

Partition meet(const Partition& a, const Partition& b, Subsystem whole)
{
    Partition raw;
    for (Subsystem x : a)
        for (Subsystem y : b)
            if (Subsystem z = x & y; !z.empty())
                split_into_runs(z, whole, raw);
    return normalize_partition(raw, whole);
}

bool merge_into(std::map<Subsystem, Partition>& closure, Subsystem whole, const Partition& p)
{
    auto it = closure.find(whole);
    if (it == closure.end()) {
        closure.emplace(whole, normalize_partition(p, whole));
        return true;
    }
    Partition m = meet(it->second, p, whole);
    if (m == it->second)
        return false;
    it->second = std::move(m);
    return true;
}

} // namespace

std::vector<Split> disconnection_implications(const Split& split)
{
    Partition p = normalize_partition(split.clusters, split.whole);
    std::vector<Split> out;
    if (p.size() < 2)
        return out;
    for_each_subset(split.whole, [&](Subsystem sub) {
        if (sub == split.whole || sub.size() < 2)
            return;
        Partition r = restrict_partition(p, sub);
        if (r.size() >= 2)
            out.push_back(Split{sub, normalize_partition(r, sub)});
    });
    std::sort(out.begin(), out.end(), [](const Split& a, const Split& b) { return a.whole < b.whole; });
    return out;
}

std::map<Subsystem, Partition> close_splits(std::span<const Split> generators)
{
    std::map<Subsystem, Partition> closure;
    for (const Split& g : generators)
        merge_into(closure, g.whole, g.clusters);
    bool changed = true;
    while (changed) {
        changed = false;
        auto snapshot = closure;
        for (const auto& [whole, p] : snapshot)
            for (const Split& s : disconnection_implications(Split{whole, p}))
                changed |= merge_into(closure, s.whole, s.clusters);
    }
    for (auto it = closure.begin(); it != closure.end();) {
        if (it->second.size() < 2)
            it = closure.erase(it);
        else
            ++it;
    }
    return closure;
}

Configuration CccConfiguration::configuration() const
{
    Configuration cfg;
    for (const auto& [whole, p] : closure)
        cfg.set(whole, p);
    return cfg;
}

std::vector<Subsystem> CccConfiguration::disconnected() const
{
    std::vector<Subsystem> out;
    for (const auto& [whole, p] : closure)
        out.push_back(whole);
    return out;
}

std::string CccConfiguration::label() const
{
    std::string s = "{";
    for (std::size_t k = 0; k < generators.size(); ++k) {
        if (k)
            s += " | ";
        s += generators[k].label();
    }
    return s + "}";
}

namespace {

using DisconnectedKey = std::vector<std::uint32_t>;

DisconnectedKey key_of(const std::map<Subsystem, Partition>& closure)
{
    DisconnectedKey k;
    for (const auto& [whole, p] : closure)
        k.push_back(whole.bits());
    std::sort(k.begin(), k.end());
    return k;
}

bool is_subset(const DisconnectedKey& a, const DisconnectedKey& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Split> reduce_generators(std::vector<Split> gens, const std::map<Subsystem, Partition>& closure)
{
    for (std::size_t k = 0; k < gens.size();) {
        std::vector<Split> rest = gens;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
        if (close_splits(rest) == closure)
            gens = std::move(rest);
        else
            ++k;
    }
    std::sort(gens.begin(), gens.end(), [](const Split& a, const Split& b) { return a.whole < b.whole; });
    return gens;
}

std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> encoding(const std::vector<Split>& gens)
{
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> e;
    for (const Split& g : gens) {
        std::vector<std::uint32_t> c;
        for (Subsystem s : g.clusters)
            c.push_back(s.bits());
        e.emplace_back(g.whole.bits(), c);
    }
    return e;
}

} // namespace

std::vector<CccConfiguration> enumerate_ccc(int n, std::span<const Subsystem> terms)
{
    std::vector<Subsystem> universe;
    if (terms.empty()) {
        universe = all_unions(n);
    } else {
        std::set<Subsystem> u;
        for (Subsystem t : terms) {
            if (!Subsystem::all(n).contains(t))
                throw Error("term " + t.label() + " exceeds n=" + std::to_string(n));
            for_each_subset(t, [&](Subsystem s) {
                if (s.size() >= 2)
                    u.insert(s);
            });
        }
        universe.assign(u.begin(), u.end());
    }
    const auto pairs = all_incompatible_pairs(universe);

    std::vector<std::pair<DisconnectedKey, CccConfiguration>> found;
    std::set<DisconnectedKey> visited;

    auto dfs = [&](auto&& self, std::vector<Split>& gens, const std::map<Subsystem, Partition>& closure) -> void {
        DisconnectedKey key = key_of(closure);
        if (!visited.insert(key).second)
            return;
        for (const auto& [k, c] : found)
            if (is_subset(k, key))
                return;
        const IncompatiblePair* open = nullptr;
        for (const auto& p : pairs) {
            if (!closure.contains(p.x) && !closure.contains(p.y)) {
                open = &p;
                break;
            }
        }
        if (!open) {
            found.emplace_back(key, CccConfiguration{gens, closure});
            return;
        }
        for (Subsystem member : {open->x, open->y}) {
            for (const Partition& split : arc_bipartitions(member)) {
                gens.push_back(Split{member, split});
                self(self, gens, close_splits(gens));
                gens.pop_back();
            }
        }
    };
    std::vector<Split> gens;
    dfs(dfs, gens, {});

    std::vector<CccConfiguration> out;
    for (const auto& [k, c] : found) {
        bool minimal = std::none_of(found.begin(), found.end(), [&](const auto& other) {
            return other.first != k && is_subset(other.first, k);
        });
        if (!minimal)
            continue;
        CccConfiguration cfg = c;
        cfg.generators = reduce_generators(c.generators, c.closure);
        out.push_back(std::move(cfg));
    }
    std::sort(out.begin(), out.end(), [](const CccConfiguration& a, const CccConfiguration& b) {
        if (a.generators.size() != b.generators.size())
            return a.generators.size() < b.generators.size();
        return encoding(a.generators) < encoding(b.generators);
    });
    return out;
}

} // namespace hei
