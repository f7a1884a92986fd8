#pragma once

#include "srkit/rational.hpp"

#include <optional>
#include <vector>

namespace srkit {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

/// Incrementally built row-echelon basis of a subspace of Q^dim.
///
/// Rows are stored as primitive integer vectors and reduced with fraction-free
/// elimination (v <- r_p·v − v_p·r, then divide by the content), so no rational
/// arithmetic happens inside the elimination.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

  /// Adds v; returns true iff it was independent of the current rows.
  bool add(const RationalVector& v);
  bool contains(const RationalVector& v) const;
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::vector<Integer> reduce(const RationalVector& v) const;

  std::size_t dim_;
  std::vector<std::vector<Integer>> rows_;
  std::vector<std::size_t> pivots_;
};

std::size_t rank(const RationalMatrix& rows, std::size_t cols);

/// Reduced row-echelon form over Q; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a, std::size_t cols);

/// Basis of {c : A c = 0} for A with `cols` columns, one vector per free column,
/// normalized so the free coordinate is 1.
std::vector<RationalVector> nullspace(RationalMatrix a, std::size_t cols);

/// Some solution of A c = b, or nullopt when inconsistent.
std::optional<RationalVector> solve(const RationalMatrix& a, std::size_t cols, const RationalVector& b);

/// The solution of A c = b of least Euclidean norm, c = Aᵀ w with (A Aᵀ) w = b.
std::optional<RationalVector> least_norm_solution(const RationalMatrix& a, std::size_t cols, const RationalVector& b);

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace srkit
