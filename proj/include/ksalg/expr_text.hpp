#pragma once

#include <string>
#include <string_view>

#include "ksalg/expr.hpp"
#include "ksalg/sexpr.hpp"

namespace ksalg {

// Grammar:
//   expr  := "0" | "s"<uint> | "(min" expr expr+ ")" | "(max" expr expr+ ")"
//          | "(diff" expr expr ")" | "(mean" alpha expr expr+ ")"
//   alpha := "-inf" | "inf" | decimal

/// Throws ParseError on syntax, arity, or alpha-literal errors.
Expr parse_expr(std::string_view text);

/// Canonical text: single spaces, shortest round-tripping alpha literals.
std::string print_expr(const Expr& e);

}  // namespace ksalg
