#include "hei/simplex.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace hei {

namespace {

int wrap(int r, int n) { return ((r - 1) % n + n) % n + 1; }

std::vector<int> parse_index_pair(std::string_view body, std::string_view whole)
{
    std::vector<int> out;
    if (body.find(',') == std::string_view::npos) {
        for (char ch : body) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw Error("bad chord label '" + std::string(whole) + "'");
            out.push_back(ch - '0');
        }
    } else {
        std::size_t p = 0;
        while (p <= body.size()) {
            std::size_t q = body.find(',', p);
            if (q == std::string_view::npos)
                q = body.size();
            std::string_view part = body.substr(p, q - p);
            if (part.empty() || !std::all_of(part.begin(), part.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
                throw Error("bad chord label '" + std::string(whole) + "'");
            out.push_back(std::stoi(std::string(part)));
            p = q + 1;
        }
    }
    if (out.size() != 2)
        throw Error("chord label needs two indices: '" + std::string(whole) + "'");
    return out;
}

} // namespace

Endpoint Endpoint::at(int position)
{
    if (position < 0)
        throw Error("negative endpoint position");
    return Endpoint{position / 2 + 1, position % 2 ? Side::Right : Side::Left};
}

std::string Endpoint::label() const { return (side == Side::Left ? "L" : "R") + std::to_string(region); }

Endpoint Endpoint::parse(std::string_view s)
{
    if (s.size() < 2 || (s[0] != 'L' && s[0] != 'R'))
        throw Error("bad endpoint label '" + std::string(s) + "'");
    int r = std::stoi(std::string(s.substr(1)));
    if (r < 1 || r > kMaxRegions)
        throw Error("endpoint region out of range");
    return Endpoint{r, s[0] == 'L' ? Side::Left : Side::Right};
}

Chord::Chord(Endpoint a, Endpoint b)
{
    if (a.region < 1 || a.region > kMaxRegions || b.region < 1 || b.region > kMaxRegions)
        throw Error("chord endpoint outside region range");
    if (a == b)
        throw Error("chord endpoints coincide");
    lo_ = std::min(a, b);
    hi_ = std::max(a, b);
}

Chord Chord::full(int i, int j) { return Chord({i, Side::Left}, {j, Side::Right}); }

Chord Chord::left_half(int i, int j)
{
    if (i == j)
        throw Error("half-chord needs distinct regions");
    return Chord({i, Side::Left}, {j, Side::Left});
}

Chord Chord::right_half(int i, int j)
{
    if (i == j)
        throw Error("half-chord needs distinct regions");
    return Chord({i, Side::Right}, {j, Side::Right});
}

Chord Chord::between(Endpoint a, Endpoint b) { return Chord(a, b); }

Chord Chord::parse(std::string_view s)
{
    if (s.size() < 4)
        throw Error("bad chord label '" + std::string(s) + "'");
    char open = s.front(), close = s.back();
    auto idx = parse_index_pair(s.substr(1, s.size() - 2), s);
    if (open == '[' && close == ']')
        return full(idx[0], idx[1]);
    if (open == '[' && close == '>')
        return left_half(idx[0], idx[1]);
    if (open == '<' && close == ']')
        return right_half(idx[0], idx[1]);
    throw Error("bad chord brackets '" + std::string(s) + "'");
}

ChordKind Chord::kind() const
{
    if (lo_.side != hi_.side)
        return ChordKind::Full;
    return lo_.side == Side::Left ? ChordKind::LeftHalf : ChordKind::RightHalf;
}

std::pair<int, int> Chord::indices() const
{
    if (kind() == ChordKind::Full) {
        const Endpoint& l = lo_.side == Side::Left ? lo_ : hi_;
        const Endpoint& r = lo_.side == Side::Left ? hi_ : lo_;
        return {l.region, r.region};
    }
    return {lo_.region, hi_.region};
}

std::string Chord::label() const
{
    auto [i, j] = indices();
    std::string body = std::to_string(i) + "," + std::to_string(j);
    switch (kind()) {
    case ChordKind::Full: return "[" + body + "]";
    case ChordKind::LeftHalf: return "[" + body + ">";
    case ChordKind::RightHalf: return "<" + body + "]";
    }
    return body;
}

bool Chord::is_gap_chord(int n) const
{
    if (kind() != ChordKind::Full)
        return false;
    auto [i, j] = indices();
    return i == wrap(j + 1, n);
}

std::strong_ordering Chord::operator<=>(const Chord& o) const
{
    if (auto c = kind() <=> o.kind(); c != 0)
        return c;
    return indices() <=> o.indices();
}

ChordMultiset::ChordMultiset(std::initializer_list<Chord> chords)
{
    for (const auto& c : chords)
        add(c);
}

void ChordMultiset::add(const Chord& c, int count)
{
    if (count < 0)
        throw Error("negative chord multiplicity");
    if (count == 0)
        return;
    chords_[c] += count;
    size_ += count;
}

void ChordMultiset::remove(const Chord& c, int count)
{
    auto it = chords_.find(c);
    if (it == chords_.end() || it->second < count)
        throw Error("removing chord " + c.label() + " not present");
    it->second -= count;
    size_ -= count;
    if (it->second == 0)
        chords_.erase(it);
}

int ChordMultiset::count(const Chord& c) const
{
    auto it = chords_.find(c);
    return it == chords_.end() ? 0 : it->second;
}

std::vector<Chord> ChordMultiset::flatten() const
{
    std::vector<Chord> out;
    for (const auto& [c, k] : chords_)
        out.insert(out.end(), k, c);
    return out;
}

std::map<int, int> ChordMultiset::endpoint_degrees() const
{
    std::map<int, int> deg;
    for (const auto& [c, k] : chords_) {
        deg[c.lo().position()] += k;
        deg[c.hi().position()] += k;
    }
    return deg;
}

ChordMultiset& ChordMultiset::operator+=(const ChordMultiset& o)
{
    for (const auto& [c, k] : o.chords_)
        add(c, k);
    return *this;
}

ChordMultiset ChordMultiset::operator+(const ChordMultiset& o) const
{
    ChordMultiset r = *this;
    return r += o;
}

std::string ChordMultiset::to_string() const
{
    if (empty())
        return "0";
    std::string s;
    for (const auto& [c, k] : chords_) {
        if (!s.empty())
            s += " + ";
        if (k != 1)
            s += std::to_string(k);
        s += c.label();
    }
    return s;
}

ChordMultiset cancel_common(ChordMultiset& a, ChordMultiset& b)
{
    ChordMultiset common;
    for (const auto& [c, k] : a.entries()) {
        int m = std::min(k, b.count(c));
        if (m)
            common.add(c, m);
    }
    for (const auto& [c, k] : common.entries()) {
        a.remove(c, k);
        b.remove(c, k);
    }
    return common;
}

bool is_restricted_arc(Subsystem cluster, Subsystem whole)
{
    if (cluster.empty() || !whole.contains(cluster))
        return false;
    auto m = whole.members();
    int rises = 0;
    for (std::size_t t = 0; t < m.size(); ++t) {
        bool here = cluster.contains(m[t]);
        bool prev = cluster.contains(m[(t + m.size() - 1) % m.size()]);
        rises += here && !prev;
    }
    return rises <= 1;
}

int arc_start(Subsystem cluster, Subsystem whole)
{
    if (!is_restricted_arc(cluster, whole))
        throw Error(cluster.label() + " is not an arc of " + whole.label());
    if (cluster == whole)
        return whole.min();
    auto m = whole.members();
    for (std::size_t t = 0; t < m.size(); ++t)
        if (cluster.contains(m[t]) && !cluster.contains(m[(t + m.size() - 1) % m.size()]))
            return m[t];
    return cluster.min();
}

std::vector<int> arc_members(Subsystem cluster, Subsystem whole)
{
    int s = arc_start(cluster, whole);
    auto m = whole.members();
    auto it = std::find(m.begin(), m.end(), s);
    std::rotate(m.begin(), it, m.end());
    std::vector<int> out;
    for (int r : m)
        if (cluster.contains(r))
            out.push_back(r);
    return out;
}

Partition normalize_partition(Partition p, Subsystem whole)
{
    Subsystem seen;
    for (Subsystem c : p) {
        if (c.empty())
            throw Error("empty cluster in partition of " + whole.label());
        if (c.intersects(seen))
            throw Error("overlapping clusters in partition of " + whole.label());
        if (!is_restricted_arc(c, whole))
            throw Error("cluster " + c.label() + " is not contiguous in " + whole.label());
        seen = seen | c;
    }
    if (seen != whole)
        throw Error("clusters do not cover " + whole.label());
    std::sort(p.begin(), p.end(), [](Subsystem a, Subsystem b) { return a.min() < b.min(); });
    return p;
}

std::string partition_label(const Partition& p, Subsystem whole)
{
    std::vector<std::pair<int, Subsystem>> order;
    for (Subsystem c : p)
        order.emplace_back(arc_start(c, whole), c);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    bool wide = whole.max() >= 10;
    std::string s;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k)
            s += wide ? "|" : ",";
        auto run = arc_members(order[k].second, whole);
        for (std::size_t t = 0; t < run.size(); ++t) {
            if (wide && t)
                s += ',';
            s += std::to_string(run[t]);
        }
    }
    return s;
}

std::vector<Partition> arc_bipartitions(Subsystem whole)
{
    auto m = whole.members();
    const std::size_t k = m.size();
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<Partition> out;
    for (std::size_t start = 0; start < k; ++start) {
        for (std::size_t len = 1; len < k; ++len) {
            Subsystem c;
            for (std::size_t t = 0; t < len; ++t)
                c = c.with(m[(start + t) % k]);
            Partition p = normalize_partition({c, whole - c}, whole);
            std::vector<std::uint32_t> key{p[0].bits(), p[1].bits()};
            if (seen.insert(key).second)
                out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Configuration::set(Subsystem whole, Partition clusters)
{
    clusters = normalize_partition(std::move(clusters), whole);
    entries_[whole] = std::move(clusters);
}

void Configuration::set_connected(Subsystem whole) { set(whole, {whole}); }

Partition Configuration::clusters(Subsystem whole) const
{
    auto it = entries_.find(whole);
    if (it != entries_.end())
        return it->second;
    if (!default_connected_)
        throw Error("configuration has no entry for " + whole.label());
    return {whole};
}

bool Configuration::is_disconnected(Subsystem whole) const { return clusters(whole).size() > 1; }

std::string ChordInequality::to_string() const { return red.to_string() + " >= " + blue.to_string(); }

ChordMultiset connected_expansion(Subsystem k)
{
    if (k.empty())
        throw Error("connected expansion of empty subsystem");
    auto m = k.members();
    ChordMultiset out;
    for (std::size_t s = 0; s < m.size(); ++s)
        out.add(Chord::full(m[(s + 1) % m.size()], m[s]));
    return out;
}

ChordMultiset expand_entropy(Subsystem k, const Configuration& cfg)
{
    ChordMultiset out;
    for (Subsystem c : cfg.clusters(k))
        out += connected_expansion(c);
    return out;
}

ChordInequality expand_inequality(const EntropyForm& form, const Configuration& cfg)
{
    EntropyForm s = i_to_s(form);
    ChordInequality out;
    for (const auto& [k, c] : s.terms()) {
        ChordMultiset e = expand_entropy(k, cfg);
        int times = static_cast<int>(c > 0 ? c : -c);
        for (int t = 0; t < times; ++t)
            (c > 0 ? out.red : out.blue) += e;
    }
    cancel_common(out.red, out.blue);
    return out;
}

Chord dual_chord(const Chord& c, int n)
{
    auto [i, j] = c.indices();
    if (i > n || j > n)
        throw Error("chord " + c.label() + " outside n=" + std::to_string(n));
    switch (c.kind()) {
    case ChordKind::Full: return Chord::full(wrap(j + 1, n), wrap(i - 1, n));
    case ChordKind::LeftHalf: return Chord::right_half(std::min(wrap(i - 1, n), wrap(j - 1, n)), std::max(wrap(i - 1, n), wrap(j - 1, n)));
    case ChordKind::RightHalf: return Chord::left_half(std::min(wrap(i + 1, n), wrap(j + 1, n)), std::max(wrap(i + 1, n), wrap(j + 1, n)));
    }
    return c;
}

} // namespace hei
