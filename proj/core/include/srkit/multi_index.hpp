#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace srkit {

/// Exponent (or derivative) multi-index in (N ∪ {0})^n.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline MultiIndex zero_index(std::size_t n) { return MultiIndex(n, 0); }

inline MultiIndex unit_index(std::size_t n, std::size_t i) {
  MultiIndex m(n, 0);
  m[i] = 1;
  return m;
}

/// Graded-lexicographic order: lower total degree first, then the index with the larger
/// leading exponent first (so x < y < x^2 < x*y < y^2 for n = 2).
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  }
};

}  // namespace srkit
