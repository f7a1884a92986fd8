#include "srkit/diffop.hpp"

#include "srkit/error.hpp"

namespace srkit {

namespace {

Integer binomial(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Calls fn(kappa) for every multi-index 0 <= kappa <= nu.
template <typename Fn>
void for_each_below(const MultiIndex& nu, Fn&& fn) {
  MultiIndex kappa(nu.size(), 0);
  while (true) {
    fn(kappa);
    std::size_t i = 0;
    while (i < nu.size() && kappa[i] == nu[i]) kappa[i++] = 0;
    if (i == nu.size()) return;
    ++kappa[i];
  }
}

}  // namespace

DifferentialOperator DifferentialOperator::identity(std::size_t n) {
  return multiplication(Polynomial::constant(n, 1));
}

DifferentialOperator DifferentialOperator::partial(std::size_t n, std::size_t i) {
  return term(Polynomial::constant(n, 1), unit_index(n, i));
}

DifferentialOperator DifferentialOperator::multiplication(const Polynomial& a) { return term(a, zero_index(a.dim())); }

DifferentialOperator DifferentialOperator::term(const Polynomial& a, const MultiIndex& nu) {
  DifferentialOperator p(a.dim());
  p.add_term(nu, a);
  return p;
}

int DifferentialOperator::order() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

bool DifferentialOperator::is_vector_field() const {
  for (const auto& [nu, a] : terms_)
    if (total_degree(nu) != 1) return false;
  return true;
}

Polynomial DifferentialOperator::coefficient(const MultiIndex& nu) const {
  auto it = terms_.find(nu);
  return it == terms_.end() ? Polynomial(dim_) : it->second;
}

void DifferentialOperator::add_term(const MultiIndex& nu, const Polynomial& a) {
  if (nu.size() != dim_ || a.dim() != dim_) throw DimensionMismatch("operator term has wrong dimension");
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(nu, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void DifferentialOperator::require_same_dim(const DifferentialOperator& o) const {
  if (dim_ != o.dim_)
    throw DimensionMismatch("operators on R^" + std::to_string(dim_) + " and R^" + std::to_string(o.dim_));
}

DifferentialOperator DifferentialOperator::operator-() const {
  DifferentialOperator r(*this);
  for (auto& [nu, a] : r.terms_) a = -a;
  return r;
}

DifferentialOperator& DifferentialOperator::operator+=(const DifferentialOperator& o) {
  require_same_dim(o);
  for (const auto& [nu, a] : o.terms_) add_term(nu, a);
  return *this;
}

DifferentialOperator& DifferentialOperator::operator-=(const DifferentialOperator& o) {
  require_same_dim(o);
  for (const auto& [nu, a] : o.terms_) add_term(nu, -a);
  return *this;
}

DifferentialOperator operator*(const Polynomial& a, const DifferentialOperator& p) {
  if (a.dim() != p.dim_) throw DimensionMismatch("multiplier has wrong dimension");
  DifferentialOperator r(p.dim_);
  for (const auto& [nu, c] : p.terms_) r.add_term(nu, a * c);
  return r;
}

DifferentialOperator operator*(const Rational& c, const DifferentialOperator& p) {
  DifferentialOperator r(p.dim_);
  for (const auto& [nu, a] : p.terms_) r.add_term(nu, a * c);
  return r;
}

DifferentialOperator DifferentialOperator::translate(std::span<const Rational> shift) const {
  DifferentialOperator r(dim_);
  for (const auto& [nu, a] : terms_) r.add_term(nu, a.translate(shift));
  return r;
}

DifferentialOperator compose(const DifferentialOperator& p, const DifferentialOperator& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("cannot compose operators of different dimension");
  const std::size_t n = p.dim();
  DifferentialOperator r(n);
  // a ∂^ν ∘ b ∂^ν' = Σ_{κ ≤ ν} C(ν,κ) a (∂^κ b) ∂^{ν−κ+ν'}
  for (const auto& [nu, a] : p.terms())
    for (const auto& [nu2, b] : q.terms())
      for_each_below(nu, [&](const MultiIndex& kappa) {
        Polynomial db = b.derivative(kappa);
        if (db.is_zero()) return;
        Integer coeff = 1;
        MultiIndex out(n);
        for (std::size_t i = 0; i < n; ++i) {
          coeff *= binomial(nu[i], kappa[i]);
          out[i] = nu[i] - kappa[i] + nu2[i];
        }
        r.add_term(out, (a * db) * Rational(coeff));
      });
  return r;
}

DifferentialOperator commutator(const DifferentialOperator& p, const DifferentialOperator& q) {
  return compose(p, q) - compose(q, p);
}

Polynomial apply(const DifferentialOperator& p, const Polynomial& f) {
  if (p.dim() != f.dim()) throw DimensionMismatch("operator and polynomial dimensions differ");
  Polynomial r(p.dim());
  for (const auto& [nu, a] : p.terms()) r += a * f.derivative(nu);
  return r;
}

RationalFunction apply(const DifferentialOperator& p, const RationalFunction& f) {
  if (p.dim() != f.dim()) throw DimensionMismatch("operator and function dimensions differ");
  RationalFunction r(p.dim());
  for (const auto& [nu, a] : p.terms()) {
    RationalFunction g = f;
    for (std::size_t i = 0; i < nu.size(); ++i)
      for (int k = 0; k < nu[i]; ++k) g = g.derivative(i);
    r += RationalFunction(a) * g;
  }
  return r;
}

std::map<int, DifferentialOperator> homogeneous_components(const DifferentialOperator& p, const WeightVector& w) {
  if (w.size() != p.dim()) throw DimensionMismatch("weight vector length does not match operator");
  std::map<int, DifferentialOperator> out;
  for (const auto& [nu, a] : p.terms()) {
    int dnu = w.degree_of(nu);
    for (const auto& [mu, c] : a.terms()) {
      auto [it, _] = out.try_emplace(w.degree_of(mu) - dnu, p.dim());
      it->second.add_term(nu, Polynomial::monomial(mu, c));
    }
  }
  return out;
}

std::optional<int> operator_degree(const DifferentialOperator& p, const WeightVector& w) {
  if (p.is_zero()) throw Error("degree of the zero operator is undefined");
  auto parts = homogeneous_components(p, w);
  if (parts.size() != 1) return std::nullopt;
  return parts.begin()->first;
}

VectorField::VectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.dim() != components_.size()) throw DimensionMismatch("vector field component has wrong dimension");
}

VectorField VectorField::from_operator(const DifferentialOperator& p) {
  if (!p.is_vector_field()) throw Error("operator is not a first-order vector field");
  VectorField x(p.dim());
  for (const auto& [nu, a] : p.terms())
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (nu[i] == 1) x.components_[i] = a;
  return x;
}

VectorField VectorField::coordinate(std::size_t n, std::size_t i) {
  VectorField x(n);
  x.components_[i] = Polynomial::constant(n, 1);
  return x;
}

bool VectorField::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

DifferentialOperator VectorField::to_operator() const {
  DifferentialOperator p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p.add_term(unit_index(dim(), i), components_[i]);
  return p;
}

std::vector<Rational> VectorField::at(std::span<const Rational> x) const {
  std::vector<Rational> v;
  v.reserve(dim());
  for (const auto& c : components_) v.push_back(c.evaluate(x));
  return v;
}

Polynomial VectorField::apply(const Polynomial& f) const {
  if (f.dim() != dim()) throw DimensionMismatch("vector field and polynomial dimensions differ");
  Polynomial r(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    if (!components_[i].is_zero()) r += components_[i] * f.derivative(i);
  return r;
}

RationalFunction VectorField::apply(const RationalFunction& f) const {
  if (f.dim() != dim()) throw DimensionMismatch("vector field and function dimensions differ");
  RationalFunction r(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    if (!components_[i].is_zero()) r += RationalFunction(components_[i]) * f.derivative(i);
  return r;
}

VectorField VectorField::operator-() const {
  VectorField r(*this);
  for (auto& c : r.components_) c = -c;
  return r;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("vector fields of different dimension");
  for (std::size_t i = 0; i < dim(); ++i) components_[i] += o.components_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("vector fields of different dimension");
  for (std::size_t i = 0; i < dim(); ++i) components_[i] -= o.components_[i];
  return *this;
}

VectorField operator*(const Polynomial& a, const VectorField& x) {
  VectorField r(x);
  for (auto& c : r.components_) c = a * c;
  return r;
}

VectorField operator*(const Rational& c, const VectorField& x) {
  VectorField r(x);
  for (auto& comp : r.components_) comp *= c;
  return r;
}

VectorField VectorField::translate(std::span<const Rational> shift) const {
  std::vector<Polynomial> comps;
  for (const auto& c : components_) comps.push_back(c.translate(shift));
  return VectorField(std::move(comps));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("vector fields of different dimension");
  std::vector<Polynomial> comps;
  for (std::size_t k = 0; k < x.dim(); ++k) comps.push_back(x.apply(y[k]) - y.apply(x[k]));
  return VectorField(std::move(comps));
}

Density Density::lebesgue(std::size_t n) { return Density{std::vector<RationalFunction>(n, RationalFunction(n))}; }

bool Density::is_lebesgue() const {
  for (const auto& g : log_gradient)
    if (!g.is_zero()) return false;
  return true;
}

RationalFunction divergence(const VectorField& x, const Density& m) {
  if (m.log_gradient.size() != x.dim()) throw DimensionMismatch("density log-gradient has wrong length");
  RationalFunction r(x.dim());
  Polynomial flat(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) flat += x[i].derivative(i);
  r = RationalFunction(flat);
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (!x[i].is_zero() && !m.log_gradient[i].is_zero()) r += RationalFunction(x[i]) * m.log_gradient[i];
  return r;
}

}  // namespace srkit
