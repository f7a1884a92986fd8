#pragma once

#include "srkit/diffop.hpp"
#include "srkit/linalg.hpp"

#include <vector>

namespace srkit {

/// Coordinates of operators in the monomial basis {z^μ ∂^ν} spanned by their joint support.
/// Every returned vector has the same length (the number of distinct (ν, μ) pairs).
std::vector<RationalVector> operator_coordinates(const std::vector<DifferentialOperator>& ops);

std::vector<DifferentialOperator> as_operators(const std::vector<VectorField>& fields);

/// Indices of a maximal independent subset, chosen greedily in input order.
std::vector<std::size_t> independent_subset(const std::vector<DifferentialOperator>& ops);

std::size_t span_dimension(const std::vector<DifferentialOperator>& ops);

/// Whether v lies in span(basis), decided exactly.
bool in_span(const std::vector<DifferentialOperator>& basis, const DifferentialOperator& v);
bool in_span(const std::vector<VectorField>& basis, const VectorField& v);

/// Σ c_k ops_k.
DifferentialOperator combine(const std::vector<DifferentialOperator>& ops, const RationalVector& c);
VectorField combine(const std::vector<VectorField>& fields, const RationalVector& c);

}  // namespace srkit
