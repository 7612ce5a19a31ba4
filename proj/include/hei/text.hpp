#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "hei/algebra.hpp"

namespace hei {

class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Grammar:
//   statement := form ('>=' | '<=') form
//   form      := '0' | ['-'] term (('+' | '-') term)*
//   term      := [integer '*'] ('S' | 'I') '(' index (',' index)* ')'
// The statement is normalised to "form >= 0". A form made only of I terms
// stays in the I basis; anything else is returned in the S basis.
// n defaults to the largest index mentioned.
EntropyForm parse_inequality(std::string_view text, int n = 0);

// Canonical text "positive terms >= negative terms" (either side may be 0).
// parse_inequality(render_inequality(f), f.n()) == f.
std::string render_inequality(const EntropyForm& form);
// Just the linear combination ("0" when empty).
std::string render_form(const EntropyForm& form);

} // namespace hei
