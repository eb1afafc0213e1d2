// JSON file formats.
//
// Operator  {"dim": n, "entries": [[[re, im], ...], ...]}   row-major
// Vector    {"dim": n, "entries": [[re, im], ...]}
// Norm      {"kind": "lp", "p": 3} | {"kind": "sup"}
//           | {"kind": "orbit_max", "base": <norm>, "generator": <operator>, "order": k}
//           | {"kind": "sum_renorm", "base": <norm>, "reflector": <operator>}
// Wco       {"points": [{"dim": d, "phi": j, "norm": <norm>, "weight": <operator>}, ...]}
//
// Emitters write numbers with 17 significant digits, so parse(emit(x)) == x
// bit for bit and emit(parse(text)) == text for emitter output.

#pragma once

#include "gbpkit/core.hpp"
#include "gbpkit/norms.hpp"
#include "gbpkit/wco.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gbpkit::io {

/// Malformed input. The message names the offending field path (for example
/// `entries[1][2]`) or carries the JSON parser's line/column report.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Operator parse_operator(std::string_view text);
std::string emit_operator(const Operator& op);

Vector parse_vector(std::string_view text);
std::string emit_vector(const Vector& v);

NormSpec parse_norm(std::string_view text, Tolerance tol = {});
std::string emit_norm(const NormSpec& spec);

WcoSpec parse_wco(std::string_view text, Tolerance tol = {});
std::string emit_wco(const WcoSpec& spec);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// "%.17g"; the representation used inside every emitted file.
std::string format_real(double x);

/// Short human-readable forms for reports ("%.15g"): 0.5, -1i, 0.5-0.28867513459481i.
std::string format_scalar(Scalar z);
std::string format_vector(const Vector& v);

} // namespace gbpkit::io
