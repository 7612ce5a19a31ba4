#include "hei/algebra.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace hei {

namespace {

std::uint32_t region_bit(int r)
{
    if (r < 1 || r > kMaxRegions)
        throw Error("region label " + std::to_string(r) + " outside 1.." + std::to_string(kMaxRegions));
    return 1u << (r - 1);
}

std::int64_t parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

} // namespace

Subsystem Subsystem::of(std::initializer_list<int> regions)
{
    return of(std::span<const int>(regions.begin(), regions.size()));
}

Subsystem Subsystem::of(std::span<const int> regions)
{
    std::uint32_t bits = 0;
    for (int r : regions) {
        std::uint32_t b = region_bit(r);
        if (bits & b)
            throw Error("duplicate region " + std::to_string(r));
        bits |= b;
    }
    return from_bits(bits);
}

Subsystem Subsystem::all(int n)
{
    if (n < 0 || n > kMaxRegions)
        throw Error("region count " + std::to_string(n) + " out of range");
    return from_bits(n == 32 ? ~0u : ((1u << n) - 1));
}

int Subsystem::size() const { return std::popcount(bits_); }

bool Subsystem::contains(int region) const
{
    return region >= 1 && region <= kMaxRegions && (bits_ >> (region - 1)) & 1u;
}

int Subsystem::min() const
{
    if (!bits_)
        throw Error("min of empty subsystem");
    return std::countr_zero(bits_) + 1;
}

int Subsystem::max() const
{
    if (!bits_)
        throw Error("max of empty subsystem");
    return 32 - std::countl_zero(bits_);
}

std::vector<int> Subsystem::members() const
{
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1)
        out.push_back(std::countr_zero(b) + 1);
    return out;
}

std::string Subsystem::label() const
{
    auto m = members();
    bool wide = !m.empty() && m.back() >= 10;
    std::string s;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (wide && k)
            s += ',';
        s += std::to_string(m[k]);
    }
    return s;
}

Subsystem Subsystem::with(int region) const { return from_bits(bits_ | region_bit(region)); }
Subsystem Subsystem::without(int region) const { return from_bits(bits_ & ~region_bit(region)); }

std::strong_ordering Subsystem::operator<=>(const Subsystem& o) const
{
    if (auto c = size() <=> o.size(); c != 0)
        return c;
    std::uint32_t d = bits_ ^ o.bits_;
    if (!d)
        return std::strong_ordering::equal;
    // Same size: the set holding the smallest differing label sorts first.
    return (bits_ & (d & (~d + 1))) ? std::strong_ordering::less : std::strong_ordering::greater;
}

const char* to_string(Basis b) { return b == Basis::S ? "S" : "I"; }

const char* to_string(BalanceClass b)
{
    switch (b) {
    case BalanceClass::Unbalanced: return "Unbalanced";
    case BalanceClass::Balanced: return "Balanced";
    case BalanceClass::Superbalanced: return "Superbalanced";
    }
    return "?";
}

EntropyForm::EntropyForm(Basis basis, int n) : basis_(basis), n_(n)
{
    if (n < 1 || n > kMaxRegions)
        throw Error("region count " + std::to_string(n) + " out of range 1.." + std::to_string(kMaxRegions));
}

std::int64_t EntropyForm::coefficient(Subsystem k) const
{
    auto it = terms_.find(k);
    return it == terms_.end() ? 0 : it->second;
}

Subsystem EntropyForm::support() const
{
    Subsystem s;
    for (const auto& [k, c] : terms_)
        s = s | k;
    return s;
}

EntropyForm& EntropyForm::add(Subsystem k, std::int64_t c)
{
    if (k.empty())
        throw Error("empty subsystem in entropy form");
    if (!Subsystem::all(n_).contains(k))
        throw Error("subsystem " + k.label() + " exceeds n=" + std::to_string(n_));
    if (c == 0)
        return *this;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
    return *this;
}

void EntropyForm::check_compatible(const EntropyForm& o) const
{
    if (basis_ != o.basis_ || n_ != o.n_)
        throw Error("combining forms with different basis or region count");
}

EntropyForm& EntropyForm::operator+=(const EntropyForm& o)
{
    check_compatible(o);
    for (const auto& [k, c] : o.terms_)
        add(k, c);
    return *this;
}

EntropyForm& EntropyForm::operator-=(const EntropyForm& o)
{
    check_compatible(o);
    for (const auto& [k, c] : o.terms_)
        add(k, -c);
    return *this;
}

EntropyForm EntropyForm::operator+(const EntropyForm& o) const
{
    EntropyForm r = *this;
    return r += o;
}

EntropyForm EntropyForm::operator-(const EntropyForm& o) const
{
    EntropyForm r = *this;
    return r -= o;
}

EntropyForm EntropyForm::operator-() const { return *this * -1; }

EntropyForm EntropyForm::operator*(std::int64_t c) const
{
    EntropyForm r(basis_, n_);
    for (const auto& [k, v] : terms_)
        r.add(k, v * c);
    return r;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image))
{
    std::vector<bool> seen(image_.size() + 1, false);
    for (int v : image_) {
        if (v < 1 || v > n() || seen[v])
            throw Error("permutation is not a bijection of 1.." + std::to_string(n()));
        seen[v] = true;
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    return Permutation(std::move(img));
}

Permutation Permutation::extend(std::span<const int> from, std::span<const int> to, int n)
{
    if (from.size() != to.size())
        throw Error("partial permutation with mismatched lengths");
    std::vector<int> img(n, 0);
    std::vector<bool> used(n + 1, false);
    for (std::size_t k = 0; k < from.size(); ++k) {
        int a = from[k], b = to[k];
        if (a < 1 || a > n || b < 1 || b > n || img[a - 1] || used[b])
            throw Error("partial permutation is not injective on 1.." + std::to_string(n));
        img[a - 1] = b;
        used[b] = true;
    }
    int next = 1;
    for (int a = 1; a <= n; ++a) {
        if (img[a - 1])
            continue;
        while (used[next])
            ++next;
        img[a - 1] = next;
        used[next] = true;
    }
    return Permutation(std::move(img));
}

int Permutation::operator()(int region) const
{
    if (region < 1 || region > n())
        throw Error("region " + std::to_string(region) + " outside permutation domain");
    return image_[region - 1];
}

Subsystem Permutation::operator()(Subsystem s) const
{
    Subsystem out;
    for (int r : s.members())
        out = out.with((*this)(r));
    return out;
}

Permutation Permutation::then(const Permutation& next) const
{
    if (next.n() != n())
        throw Error("composing permutations of different size");
    std::vector<int> img(n());
    for (int r = 1; r <= n(); ++r)
        img[r - 1] = next((*this)(r));
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const
{
    std::vector<int> img(n());
    for (int r = 1; r <= n(); ++r)
        img[image_[r - 1] - 1] = r;
    return Permutation(std::move(img));
}

EntropyForm i_to_s(const EntropyForm& form)
{
    if (form.basis() == Basis::S)
        return form;
    EntropyForm out(Basis::S, form.n());
    for (const auto& [k, c] : form.terms())
        for_each_subset(k, [&](Subsystem j) { out.add(j, parity_sign(j.size() + 1) * c); });
    return out;
}

EntropyForm s_to_i(const EntropyForm& form)
{
    if (form.basis() == Basis::I)
        return form;
    // Coefficient of I_K collects every S_J with J containing K.
    EntropyForm out(Basis::I, form.n());
    for (const auto& [j, d] : form.terms())
        for_each_subset(j, [&](Subsystem k) { out.add(k, parity_sign(k.size() + 1) * d); });
    return out;
}

EntropyForm to_basis(const EntropyForm& form, Basis basis)
{
    return basis == Basis::S ? i_to_s(form) : s_to_i(form);
}

BalanceClass classify_balance(const EntropyForm& form)
{
    EntropyForm f = s_to_i(form);
    bool singles = false, pairs = false;
    for (const auto& [k, c] : f.terms()) {
        singles |= k.size() == 1;
        pairs |= k.size() == 2;
    }
    if (singles)
        return BalanceClass::Unbalanced;
    return pairs ? BalanceClass::Balanced : BalanceClass::Superbalanced;
}

EntropyForm group_regions(std::span<const Subsystem> blocks, int n)
{
    if (blocks.empty())
        throw Error("group_regions needs at least one block");
    Subsystem seen;
    for (Subsystem b : blocks) {
        if (b.empty())
            throw Error("empty block in group_regions");
        if (b.intersects(seen))
            throw Error("overlapping blocks in group_regions");
        seen = seen | b;
    }
    EntropyForm out(Basis::I, n);
    // Distribute over one non-empty sub-block per block.
    auto recurse = [&](auto&& self, std::size_t k, Subsystem acc, int exponent) -> void {
        if (k == blocks.size()) {
            out.add(acc, parity_sign(exponent));
            return;
        }
        for_each_subset(blocks[k], [&](Subsystem part) {
            self(self, k + 1, acc | part, exponent + part.size() + 1);
        });
    };
    recurse(recurse, 0, Subsystem{}, 0);
    return out;
}

EntropyForm eliminate_region(const EntropyForm& form, int region)
{
    if (region < 1 || region > form.n())
        throw Error("region " + std::to_string(region) + " out of range 1.." + std::to_string(form.n()));
    EntropyForm f = s_to_i(form);
    if (classify_balance(f) != BalanceClass::Superbalanced)
        throw Error("eliminate_region requires a superbalanced form");
    const Subsystem all = Subsystem::all(f.n());
    EntropyForm out(Basis::I, f.n());
    for (const auto& [k0, c] : f.terms()) {
        if (!k0.contains(region)) {
            out.add(k0, c);
            continue;
        }
        Subsystem k = k0.without(region);
        Subsystem rest = all - k0;
        // The empty Q contributes alongside the non-empty ones.
        out.add(k, c);
        out.add(k, parity_sign(k.size() + 1) * c);
        for_each_subset(rest, [&](Subsystem q) {
            Subsystem kq = k | q;
            out.add(kq, parity_sign(kq.size() + 1) * c);
        });
    }
    return out;
}

EntropyForm canonicalize_complement(const EntropyForm& form, int pivot)
{
    EntropyForm f = i_to_s(form);
    if (pivot == 0)
        pivot = f.n();
    if (pivot < 1 || pivot > f.n())
        throw Error("pivot region out of range");
    const Subsystem all = Subsystem::all(f.n());
    EntropyForm out(Basis::S, f.n());
    for (const auto& [k, c] : f.terms()) {
        if (!k.contains(pivot))
            out.add(k, c);
        else if (k != all)
            out.add(all - k, c);
    }
    return out;
}

EntropyForm apply_permutation(const EntropyForm& form, const Permutation& p)
{
    if (p.n() != form.n())
        throw Error("permutation size does not match region count");
    EntropyForm out(form.basis(), form.n());
    for (const auto& [k, c] : form.terms())
        out.add(p(k), c);
    return out;
}

EntropyForm compress_support(const EntropyForm& form, std::vector<int>* labels)
{
    auto members = form.support().members();
    if (members.empty())
        members.push_back(1);
    std::vector<int> rank(kMaxRegions + 1, 0);
    for (std::size_t k = 0; k < members.size(); ++k)
        rank[members[k]] = static_cast<int>(k) + 1;
    EntropyForm out(form.basis(), static_cast<int>(members.size()));
    for (const auto& [k, c] : form.terms()) {
        Subsystem m;
        for (int r : k.members())
            m = m.with(rank[r]);
        out.add(m, c);
    }
    if (labels)
        *labels = members;
    return out;
}

EntropyForm expand_labels(const EntropyForm& form, std::span<const int> labels, int n)
{
    if (static_cast<int>(labels.size()) < form.n())
        throw Error("label map shorter than region count");
    EntropyForm out(form.basis(), n);
    for (const auto& [k, c] : form.terms()) {
        Subsystem m;
        for (int r : k.members())
            m = m.with(labels[r - 1]);
        out.add(m, c);
    }
    return out;
}

std::int64_t evaluate(const EntropyForm& form, std::span<const std::int64_t> entropies)
{
    if (entropies.size() < (std::size_t{1} << form.n()))
        throw Error("entropy vector too short for n=" + std::to_string(form.n()));
    EntropyForm f = i_to_s(form);
    std::int64_t v = 0;
    for (const auto& [k, c] : f.terms())
        v += c * entropies[k.bits()];
    return v;
}

} // namespace hei
