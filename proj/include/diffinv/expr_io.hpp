#ifndef DIFFINV_EXPR_IO_HPP
#define DIFFINV_EXPR_IO_HPP

#include <string>

#include "diffinv/rat.hpp"

namespace diffinv {

// Parse an expression over the declared variables. Standard infix grammar:
// +, -, *, / and ^ with positive integer exponents, parentheses, integer
// literals (fractions are division of literals), unary minus. Errors carry
// the offending byte position.
Rat parse_expr(const std::string& text, const VarSet& vars);

// Canonical printers; parse_expr(to_string(e), e.vars()) == e.
std::string to_string(const Poly& p);
std::string to_string(const Rat& r);

} // namespace diffinv

#endif
