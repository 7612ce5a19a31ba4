#pragma once

#include <string>
#include <string_view>

#include "hei/prover.hpp"

namespace hei {

std::string certificate_to_json(const ProofCertificate& cert, int indent = 2);
// Throws Error on malformed input.
ProofCertificate certificate_from_json(std::string_view text);

// Circle layout with pinned endpoint positions (neato -n); red chords solid,
// blue dashed, multiplicities as labels.
std::string diagram_to_dot(const CircularDiagram& d, std::string_view title);
std::string diagram_to_svg(const CircularDiagram& d, std::string_view title);

} // namespace hei
