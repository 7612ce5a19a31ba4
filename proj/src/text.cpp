#include "hei/text.hpp"

#include <cctype>
#include <limits>
#include <vector>

namespace hei {

ParseError::ParseError(std::size_t offset, const std::string& what)
    : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset)
{
}

namespace {

struct RawTerm {
    Basis basis;
    std::vector<int> regions;
    std::int64_t coeff;
};

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    std::vector<RawTerm> statement()
    {
        std::vector<RawTerm> lhs = form();
        skip_ws();
        bool ge;
        if (accept(">="))
            ge = true;
        else if (accept("<="))
            ge = false;
        else
            fail("expected '>=' or '<='");
        std::vector<RawTerm> rhs = form();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        std::vector<RawTerm> out;
        for (auto& t : lhs) {
            if (!ge)
                t.coeff = -t.coeff;
            out.push_back(t);
        }
        for (auto& t : rhs) {
            if (ge)
                t.coeff = -t.coeff;
            out.push_back(t);
        }
        return out;
    }

private:
    std::vector<RawTerm> form()
    {
        std::vector<RawTerm> out;
        skip_ws();
        if (peek() == '0' && !next_is_term_after_zero()) {
            ++pos_;
            return out;
        }
        std::int64_t sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        out.push_back(term(sign));
        while (true) {
            skip_ws();
            if (peek() == '+')
                sign = 1;
            else if (peek() == '-')
                sign = -1;
            else
                break;
            ++pos_;
            out.push_back(term(sign));
        }
        return out;
    }

    // "0" alone is the empty form; "0*S(1)" is not accepted either way.
    bool next_is_term_after_zero() const
    {
        std::size_t p = pos_ + 1;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p])))
            ++p;
        while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p])))
            ++p;
        return p < s_.size() && s_[p] == '*';
    }

    RawTerm term(std::int64_t sign)
    {
        skip_ws();
        std::int64_t coeff = 1;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::size_t at = pos_;
            coeff = integer();
            if (coeff == 0)
                fail("zero coefficient", at);
            skip_ws();
            if (!accept("*"))
                fail("expected '*' after coefficient");
            skip_ws();
        }
        Basis basis;
        if (peek() == 'S')
            basis = Basis::S;
        else if (peek() == 'I')
            basis = Basis::I;
        else
            fail("expected 'S' or 'I'");
        ++pos_;
        skip_ws();
        if (!accept("("))
            fail("expected '('");
        std::vector<int> regions;
        std::uint32_t seen = 0;
        do {
            skip_ws();
            std::size_t at = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected region index");
            std::int64_t r = integer();
            if (r < 1 || r > kMaxRegions)
                fail("region index out of range 1.." + std::to_string(kMaxRegions), at);
            if (seen & (1u << (r - 1)))
                fail("duplicate region index " + std::to_string(r), at);
            seen |= 1u << (r - 1);
            regions.push_back(static_cast<int>(r));
            skip_ws();
        } while (accept(","));
        if (!accept(")"))
            fail("expected ',' or ')'");
        return RawTerm{basis, regions, sign * coeff};
    }

    std::int64_t integer()
    {
        std::int64_t v = 0;
        std::size_t at = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
                fail("integer too large", at);
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    bool accept(std::string_view tok)
    {
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) { fail(what, pos_); }
    [[noreturn]] void fail(const std::string& what, std::size_t at) { throw ParseError(at, what); }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string render_term(Subsystem k, std::int64_t c, Basis b)
{
    std::string s;
    if (c != 1)
        s += std::to_string(c) + "*";
    s += to_string(b);
    s += '(';
    auto m = k.members();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(m[i]);
    }
    return s + ')';
}

std::string render_sum(const std::vector<std::pair<Subsystem, std::int64_t>>& terms, Basis b)
{
    if (terms.empty())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i)
            s += " + ";
        s += render_term(terms[i].first, terms[i].second, b);
    }
    return s;
}

} // namespace

EntropyForm parse_inequality(std::string_view text, int n)
{
    std::vector<RawTerm> terms = Parser(text).statement();
    int top = 0;
    bool all_i = !terms.empty();
    for (const auto& t : terms) {
        for (int r : t.regions)
            top = std::max(top, r);
        all_i &= t.basis == Basis::I;
    }
    if (n == 0)
        n = std::max(top, 1);
    if (top > n)
        throw ParseError(0, "index " + std::to_string(top) + " exceeds n=" + std::to_string(n));
    EntropyForm out(all_i ? Basis::I : Basis::S, n);
    for (const auto& t : terms) {
        EntropyForm one(t.basis, n);
        one.add(Subsystem::of(t.regions), t.coeff);
        out += to_basis(one, out.basis());
    }
    return out;
}

std::string render_form(const EntropyForm& form)
{
    if (form.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : form.terms()) {
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        s += render_term(k, c < 0 ? -c : c, form.basis());
        first = false;
    }
    return s;
}

std::string render_inequality(const EntropyForm& form)
{
    std::vector<std::pair<Subsystem, std::int64_t>> pos, neg;
    for (const auto& [k, c] : form.terms())
        (c > 0 ? pos : neg).emplace_back(k, c > 0 ? c : -c);
    return render_sum(pos, form.basis()) + " >= " + render_sum(neg, form.basis());
}

} // namespace hei
