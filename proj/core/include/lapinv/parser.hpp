#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lapinv/jetexpr.hpp"

namespace lapinv {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the expression grammar:
///   jetvar := "a[" ints "]" deriv? | "g" deriv? | name deriv?
///   deriv  := ";[" ints "]"
/// with + - * / ^ (nonnegative integer exponent), integer literals and
/// parentheses. A parenthesized group may carry a deriv suffix too:
/// "(a[0,1]/a[0,2]);[1,0]" is the x-derivative of the quotient. Every
/// multi-index must have length `dim`.
JetExpr parse_expr(std::string_view text, std::size_t dim);

/// "[2,1]" -> MultiIndex. Whitespace is ignored.
MultiIndex parse_multi_index(std::string_view text);

/// Parameter names must be identifiers other than "a", "g" and "D".
bool is_valid_parameter_name(std::string_view name);

} // namespace lapinv
