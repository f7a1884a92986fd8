#pragma once

#include "srkit/error.hpp"
#include "srkit/multi_index.hpp"

#include <string_view>
#include <vector>

namespace srkit {

/// Coordinate weights (w_1, ..., w_n): positive and non-decreasing.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<int> w);

  /// All ones; the Riemannian case.
  static WeightVector uniform(std::size_t n) { return WeightVector(std::vector<int>(n, 1)); }

  std::size_t size() const noexcept { return w_.size(); }
  int operator[](std::size_t i) const { return w_[i]; }
  const std::vector<int>& values() const noexcept { return w_; }
  int max() const { return w_.empty() ? 0 : w_.back(); }

  /// Σ μ_i w_i.
  int degree_of(const MultiIndex& mu) const;

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<int> w_;
};

WeightVector parse_weights(std::string_view text);

}  // namespace srkit
