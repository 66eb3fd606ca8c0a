#ifndef POSOP_MATRIX_IO_HPP
#define POSOP_MATRIX_IO_HPP

// Reading and writing operators. Two input formats are accepted:
//
//   JSON: {"dim": n, "space": {"kind": "lp"|"ck"|"seq", "p": 2, "a": 0, "b": 1},
//          "rows": [[...], ...], "label": "..."}
//     "space" may also carry explicit "weights" (lp) or "coordinates"
//     (lp, ck). "p" accepts a number or the string "inf".
//
//   Plain text: one matrix row per line, entries separated by whitespace.
//     Lines starting with '#' are ignored. The space is Sequence(2).

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "posop/operators.hpp"

namespace posop {

Operator operator_from_json(const nlohmann::json& doc);
Operator operator_from_text(std::string_view text, std::string label = {});

/// Dispatches on the first non-blank character: '{' means JSON.
Operator parse_operator(std::string_view content, std::string label = {});

/// Reads and parses a file. Throws ParseError when it cannot be read.
Operator load_operator(const std::string& path);

nlohmann::json space_to_json(const SpaceSemantics& space);
/// Round-trips through operator_from_json.
nlohmann::json operator_to_json(const Operator& t);

/// p as a JSON value; +infinity becomes "inf".
nlohmann::json exponent_to_json(double p);

}  // namespace posop

#endif  // POSOP_MATRIX_IO_HPP
