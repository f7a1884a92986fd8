#pragma once

#include "srkit/checks.hpp"
#include "srkit/diffop.hpp"

#include <json.hpp>

namespace srkit {

using Json = nlohmann::json;

/// Rational as a JSON integer when it fits in 64 bits, else as a decimal string.
Json integer_to_json(const Integer& z);
Integer integer_from_json(const Json& j);

Json rational_to_json(const Rational& q);  // "p/q" string
Rational rational_from_json(const Json& j);

/// Array of {"coeff-num", "coeff-den", "mu", "nu"} in canonical (graded-lex ν, then μ) order.
Json to_json(const DifferentialOperator& p);
DifferentialOperator operator_from_json(const Json& j, std::size_t n);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, std::size_t n);

Json to_json(const CheckList& checks);
Json to_json(const Point& p);

}  // namespace srkit
