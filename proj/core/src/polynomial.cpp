#include "srkit/polynomial.hpp"

#include "srkit/error.hpp"

#include <algorithm>

namespace srkit {

Polynomial Polynomial::constant(std::size_t n, const Rational& c) {
  Polynomial p(n);
  p.add_term(zero_index(n), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  if (i >= n) throw DimensionMismatch("variable index out of range");
  Polynomial p(n);
  p.add_term(unit_index(n, i), Rational(1));
  return p;
}

Polynomial Polynomial::monomial(MultiIndex mu, const Rational& c) {
  Polynomial p(mu.size());
  p.add_term(mu, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && ::srkit::total_degree(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_term() const { return coefficient(zero_index(dim_)); }

Rational Polynomial::coefficient(const MultiIndex& mu) const {
  auto it = terms_.find(mu);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  return terms_.empty() ? -1 : ::srkit::total_degree(terms_.rbegin()->first);
}

void Polynomial::add_term(const MultiIndex& mu, const Rational& c) {
  if (mu.size() != dim_) throw DimensionMismatch("monomial has wrong number of variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(mu, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::require_same_dim(const Polynomial& o) const {
  if (dim_ != o.dim_)
    throw DimensionMismatch("polynomials in " + std::to_string(dim_) + " and " + std::to_string(o.dim_) +
                            " variables");
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [mu, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_same_dim(o);
  for (const auto& [mu, c] : o.terms_) add_term(mu, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_same_dim(o);
  for (const auto& [mu, c] : o.terms_) add_term(mu, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_dim(b);
  Polynomial r(a.dim_);
  MultiIndex mu(a.dim_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = ma[i] + mb[i];
      r.add_term(mu, ca * cb);
    }
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mu, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(dim_, 1), base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  if (i >= dim_) throw DimensionMismatch("derivative index out of range");
  Polynomial r(dim_);
  for (const auto& [mu, c] : terms_) {
    if (mu[i] == 0) continue;
    MultiIndex nu = mu;
    nu[i] -= 1;
    r.add_term(nu, c * mu[i]);
  }
  return r;
}

Polynomial Polynomial::derivative(const MultiIndex& nu) const {
  if (nu.size() != dim_) throw DimensionMismatch("derivative multi-index has wrong length");
  Polynomial r(dim_);
  for (const auto& [mu, c] : terms_) {
    MultiIndex out = mu;
    Rational coeff = c;
    bool vanishes = false;
    for (std::size_t i = 0; i < dim_ && !vanishes; ++i) {
      if (nu[i] > mu[i]) {
        vanishes = true;
        break;
      }
      for (int k = 0; k < nu[i]; ++k) coeff *= (mu[i] - k);
      out[i] -= nu[i];
    }
    if (!vanishes) r.add_term(out, coeff);
  }
  return r;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (x.size() != dim_) throw DimensionMismatch("evaluation point has wrong dimension");
  Rational total = 0;
  for (const auto& [mu, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < dim_; ++i)
      if (mu[i]) term *= ::srkit::pow(x[i], mu[i]);
    total += term;
  }
  return total;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionMismatch("evaluation point has wrong dimension");
  double total = 0;
  for (const auto& [mu, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < dim_; ++i)
      for (int k = 0; k < mu[i]; ++k) term *= x[i];
    total += term;
  }
  return total;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& q) const {
  if (q.size() != dim_) throw DimensionMismatch("substitution needs one polynomial per variable");
  std::size_t m = q.empty() ? 0 : q.front().dim();
  for (const auto& qi : q)
    if (qi.dim() != m) throw DimensionMismatch("substituted polynomials disagree in dimension");
  // Cache powers of each substituted polynomial.
  std::vector<std::vector<Polynomial>> powers(dim_);
  Polynomial result(m);
  for (const auto& [mu, c] : terms_) {
    Polynomial term = constant(m, c);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!mu[i]) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(m, 1));
      while (cache.size() <= static_cast<std::size_t>(mu[i])) cache.push_back(cache.back() * q[i]);
      term *= cache[mu[i]];
    }
    result += term;
  }
  return result;
}

Polynomial Polynomial::translate(std::span<const Rational> shift) const {
  if (shift.size() != dim_) throw DimensionMismatch("translation vector has wrong dimension");
  std::vector<Polynomial> q;
  for (std::size_t i = 0; i < dim_; ++i) q.push_back(variable(dim_, i) + constant(dim_, shift[i]));
  return substitute(q);
}

Polynomial Polynomial::extend(std::size_t n) const {
  if (n < dim_) throw DimensionMismatch("cannot extend to fewer variables");
  Polynomial r(n);
  for (const auto& [mu, c] : terms_) {
    MultiIndex nu = mu;
    nu.resize(n, 0);
    r.add_term(nu, c);
  }
  return r;
}

std::pair<MultiIndex, Rational> Polynomial::leading_term() const {
  if (terms_.empty()) throw Error("zero polynomial has no leading term");
  return *terms_.rbegin();
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& q) const {
  require_same_dim(q);
  if (q.is_zero()) throw Error("division by the zero polynomial");
  // Multivariate division by a single polynomial under a monomial order: the remainder is
  // zero iff q divides p, because {q} is a Groebner basis of the ideal (q).
  auto [lq_mu, lq_c] = q.leading_term();
  Polynomial rest = *this, quotient(dim_);
  while (!rest.is_zero()) {
    auto [lm, lc] = rest.leading_term();
    MultiIndex shift(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      shift[i] = lm[i] - lq_mu[i];
      if (shift[i] < 0) return std::nullopt;
    }
    Polynomial t = monomial(shift, lc / lq_c);
    quotient += t;
    rest -= t * q;
  }
  return quotient;
}

std::optional<int> weighted_degree(const Polynomial& p, const WeightVector& w) {
  if (p.is_zero()) throw Error("degree of zero undefined");
  if (w.size() != p.dim()) throw DimensionMismatch("weight vector length does not match polynomial");
  std::optional<int> d;
  for (const auto& [mu, c] : p.terms()) {
    int dm = w.degree_of(mu);
    if (d && *d != dm) return std::nullopt;
    d = dm;
  }
  return d;
}

std::map<int, Polynomial> homogeneous_parts(const Polynomial& p, const WeightVector& w) {
  std::map<int, Polynomial> parts;
  for (const auto& [mu, c] : p.terms()) {
    auto [it, _] = parts.try_emplace(w.degree_of(mu), p.dim());
    it->second.add_term(mu, c);
  }
  return parts;
}

namespace {

void enumerate(const WeightVector& w, std::size_t i, int remaining, MultiIndex& mu, std::vector<MultiIndex>& out) {
  if (i == w.size()) {
    if (remaining == 0) out.push_back(mu);
    return;
  }
  for (int e = 0; e * w[i] <= remaining; ++e) {
    mu[i] = e;
    enumerate(w, i + 1, remaining - e * w[i], mu, out);
  }
  mu[i] = 0;
}

}  // namespace

std::vector<MultiIndex> monomials_of_weighted_degree(const WeightVector& w, int d) {
  std::vector<MultiIndex> out;
  if (d < 0) return out;
  MultiIndex mu(w.size(), 0);
  enumerate(w, 0, d, mu, out);
  std::sort(out.begin(), out.end(), GradedLex{});
  return out;
}

}  // namespace srkit
