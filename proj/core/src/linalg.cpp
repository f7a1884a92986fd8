#include "srkit/linalg.hpp"

#include "srkit/error.hpp"

namespace srkit {

namespace {

std::vector<Integer> clear_denominators(const RationalVector& v) {
  Integer l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(v.size());
  for (const auto& q : v) out.emplace_back(q.get_num() * (l / q.get_den()));
  return out;
}

void make_primitive(std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

std::vector<Integer> EchelonBasis::reduce(const RationalVector& v) const {
  if (v.size() != dim_) throw DimensionMismatch("vector length does not match basis dimension");
  std::vector<Integer> w = clear_denominators(v);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if (w[p] == 0) continue;
    const auto& r = rows_[k];
    Integer a = r[p], b = w[p];
    for (std::size_t j = 0; j < dim_; ++j) w[j] = a * w[j] - b * r[j];
    make_primitive(w);
  }
  return w;
}

bool EchelonBasis::add(const RationalVector& v) {
  auto w = reduce(v);
  for (std::size_t j = 0; j < dim_; ++j)
    if (w[j] != 0) {
      make_primitive(w);
      rows_.push_back(std::move(w));
      pivots_.push_back(j);
      return true;
    }
  return false;
}

bool EchelonBasis::contains(const RationalVector& v) const {
  auto w = reduce(v);
  for (const auto& x : w)
    if (x != 0) return false;
  return true;
}

std::size_t rank(const RationalMatrix& rows, std::size_t cols) {
  EchelonBasis b(cols);
  for (const auto& r : rows) b.add(r);
  return b.rank();
}

std::vector<std::size_t> rref(RationalMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < a[r].size(); ++j) a[r][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<RationalVector> nullspace(RationalMatrix a, std::size_t cols) {
  for (const auto& r : a)
    if (r.size() != cols) throw DimensionMismatch("ragged matrix");
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve(const RationalMatrix& a, std::size_t cols, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("right-hand side length does not match matrix");
  RationalMatrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (aug[i].size() != cols) throw DimensionMismatch("ragged matrix");
    aug[i].push_back(b[i]);
  }
  auto pivots = rref(aug, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RationalVector x(cols, Rational(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug[k][cols];
  return x;
}

std::optional<RationalVector> least_norm_solution(const RationalMatrix& a, std::size_t cols, const RationalVector& b) {
  const std::size_t m = a.size();
  RationalMatrix gram(m, RationalVector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) gram[i][j] = dot(a[i], a[j]);
  auto w = solve(gram, m, b);
  if (!w) return std::nullopt;
  RationalVector x(cols, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < cols; ++j) x[j] += a[i][j] * (*w)[i];
  // A Aᵀ w = b is solvable whenever b ∈ range(A), but double-check consistency of A x = b.
  for (std::size_t i = 0; i < m; ++i)
    if (dot(a[i], x) != b[i]) return std::nullopt;
  return x;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors of different length");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace srkit
