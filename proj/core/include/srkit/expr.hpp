#pragma once

#include "srkit/diffop.hpp"
#include "srkit/polynomial.hpp"
#include "srkit/rational_function.hpp"

#include <map>
#include <string>
#include <string_view>

namespace srkit {

/// Named rational constants usable inside expressions (e.g. p = 3).
using ParameterMap = std::map<std::string, Rational>;

/// Textual syntax shared by structure files and the CLI:
///
///   variables   z1..zn, with aliases x, y, z when n <= 3
///   partials    d1..dn, with aliases dx, dy, dz when n <= 3
///   operators   + - * / ^ and parentheses; exponents are non-negative integer literals
///
/// Operator expressions are normal-ordered: in `y*dz` and `dz*y` alike the coefficient
/// multiplies after differentiation, so both denote y∂_z.
Polynomial parse_polynomial(std::string_view text, std::size_t n, const ParameterMap& params = {});
RationalFunction parse_rational_function(std::string_view text, std::size_t n, const ParameterMap& params = {});
DifferentialOperator parse_operator(std::string_view text, std::size_t n, const ParameterMap& params = {});
VectorField parse_vector_field(std::string_view text, std::size_t n, const ParameterMap& params = {});

std::string variable_name(std::size_t n, std::size_t i);
std::string partial_name(std::size_t n, std::size_t i);

/// Printers emit text that parses back to the same value.
std::string to_string(const Polynomial& p);
std::string to_string(const RationalFunction& f);
std::string to_string(const DifferentialOperator& p);
std::string to_string(const VectorField& x);

}  // namespace srkit
