#include "srkit/field_span.hpp"

#include "srkit/error.hpp"

#include <map>

namespace srkit {

std::vector<RationalVector> operator_coordinates(const std::vector<DifferentialOperator>& ops) {
  std::map<std::pair<MultiIndex, MultiIndex>, std::size_t> columns;
  for (const auto& op : ops)
    for (const auto& [nu, a] : op.terms())
      for (const auto& [mu, c] : a.terms()) columns.try_emplace({nu, mu}, 0);
  std::size_t k = 0;
  for (auto& [key, col] : columns) col = k++;
  std::vector<RationalVector> out;
  for (const auto& op : ops) {
    RationalVector v(columns.size(), Rational(0));
    for (const auto& [nu, a] : op.terms())
      for (const auto& [mu, c] : a.terms()) v[columns.at({nu, mu})] = c;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<DifferentialOperator> as_operators(const std::vector<VectorField>& fields) {
  std::vector<DifferentialOperator> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(f.to_operator());
  return out;
}

std::vector<std::size_t> independent_subset(const std::vector<DifferentialOperator>& ops) {
  auto coords = operator_coordinates(ops);
  std::vector<std::size_t> keep;
  if (coords.empty()) return keep;
  EchelonBasis basis(coords.front().size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (basis.add(coords[i])) keep.push_back(i);
  return keep;
}

std::size_t span_dimension(const std::vector<DifferentialOperator>& ops) { return independent_subset(ops).size(); }

bool in_span(const std::vector<DifferentialOperator>& basis, const DifferentialOperator& v) {
  if (v.is_zero()) return true;
  auto all = basis;
  all.push_back(v);
  auto coords = operator_coordinates(all);
  EchelonBasis b(coords.front().size());
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) b.add(coords[i]);
  return b.contains(coords.back());
}

bool in_span(const std::vector<VectorField>& basis, const VectorField& v) {
  return in_span(as_operators(basis), v.to_operator());
}

DifferentialOperator combine(const std::vector<DifferentialOperator>& ops, const RationalVector& c) {
  if (ops.size() != c.size()) throw DimensionMismatch("coefficient count does not match operator count");
  if (ops.empty()) throw Error("cannot combine an empty list");
  DifferentialOperator r(ops.front().dim());
  for (std::size_t k = 0; k < ops.size(); ++k)
    if (c[k] != 0) r += c[k] * ops[k];
  return r;
}

VectorField combine(const std::vector<VectorField>& fields, const RationalVector& c) {
  if (fields.size() != c.size()) throw DimensionMismatch("coefficient count does not match field count");
  if (fields.empty()) throw Error("cannot combine an empty list");
  VectorField r(fields.front().dim());
  for (std::size_t k = 0; k < fields.size(); ++k)
    if (c[k] != 0) r += c[k] * fields[k];
  return r;
}

}  // namespace srkit
