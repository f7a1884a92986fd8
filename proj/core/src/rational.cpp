#include "srkit/rational.hpp"

#include "srkit/error.hpp"

#include <cctype>

namespace srkit {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error("empty rational literal");

  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  auto digits_only = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  Rational result;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw Error("malformed rational literal '" + std::string(text) + "'");
    Integer d(den, 10);
    if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    result = Rational(Integer(num, 10), d);
    result.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits_only(ip) || (!fp.empty() && !digits_only(fp)))
      throw Error("malformed decimal literal '" + std::string(text) + "'");
    Integer scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    result = Rational(Integer(ip + fp, 10), scale);
    result.canonicalize();
  } else {
    if (!digits_only(body)) throw Error("malformed rational literal '" + std::string(text) + "'");
    result = Rational(Integer(body, 10));
  }
  return negative ? Rational(-result) : result;
}

Point parse_point(std::string_view text) {
  Point p;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    p.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += p[i].get_str();
  }
  return s;
}

Rational ratio(long num, long den) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow(const Rational& q, long k) {
  if (k < 0) {
    if (q == 0) throw Error("negative power of zero");
    return Rational(1) / pow(q, -k);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(k));
  return Rational(num, den);
}

bool exact_root(const Rational& q, unsigned long k, Rational& out) {
  if (q < 0 || k == 0) return false;
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), q.get_num_mpz_t(), k) == 0) return false;
  if (mpz_root(den.get_mpz_t(), q.get_den_mpz_t(), k) == 0) return false;
  out = Rational(num, den);
  return true;
}

}  // namespace srkit
