#include "srkit/serialize.hpp"

#include "srkit/error.hpp"

#include <limits>

namespace srkit {

Json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) return Integer(j.get<std::string>(), 10);
  throw Error("expected an integer in JSON");
}

Json rational_to_json(const Rational& q) { return Json(q.get_str()); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error("expected a rational in JSON");
}

namespace {

MultiIndex index_from_json(const Json& j, std::size_t n) {
  auto mu = j.get<MultiIndex>();
  if (mu.size() != n) throw DimensionMismatch("serialized multi-index has wrong length");
  for (int e : mu)
    if (e < 0) throw Error("negative exponent in serialized multi-index");
  return mu;
}

Json term(const Rational& c, const MultiIndex& mu, const MultiIndex* nu) {
  Json t;
  t["coeff-num"] = integer_to_json(c.get_num());
  t["coeff-den"] = integer_to_json(c.get_den());
  t["mu"] = mu;
  if (nu) t["nu"] = *nu;
  return t;
}

Rational coeff_from(const Json& t) {
  Integer den = integer_from_json(t.at("coeff-den"));
  if (den <= 0) throw Error("non-positive denominator in serialized coefficient");
  Rational c(integer_from_json(t.at("coeff-num")), den);
  c.canonicalize();
  return c;
}

}  // namespace

Json to_json(const DifferentialOperator& p) {
  Json arr = Json::array();
  for (const auto& [nu, a] : p.terms())
    for (const auto& [mu, c] : a.terms()) arr.push_back(term(c, mu, &nu));
  return arr;
}

DifferentialOperator operator_from_json(const Json& j, std::size_t n) {
  DifferentialOperator p(n);
  for (const auto& t : j) p.add_term(index_from_json(t.at("nu"), n), Polynomial::monomial(index_from_json(t.at("mu"), n), coeff_from(t)));
  return p;
}

Json to_json(const Polynomial& p) {
  Json arr = Json::array();
  for (const auto& [mu, c] : p.terms()) arr.push_back(term(c, mu, nullptr));
  return arr;
}

Polynomial polynomial_from_json(const Json& j, std::size_t n) {
  Polynomial p(n);
  for (const auto& t : j) p.add_term(index_from_json(t.at("mu"), n), coeff_from(t));
  return p;
}

Json to_json(const CheckList& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

Json to_json(const Point& p) {
  Json arr = Json::array();
  for (const auto& q : p) arr.push_back(rational_to_json(q));
  return arr;
}

}  // namespace srkit
