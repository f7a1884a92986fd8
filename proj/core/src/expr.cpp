#include "srkit/expr.hpp"

#include "srkit/error.hpp"

#include <cctype>
#include <sstream>

namespace srkit {

namespace {

// Expressions are evaluated as rational functions in 2n commuting symbols: z_1..z_n
// followed by the partial-derivative symbols d_1..d_n.
class Parser {
 public:
  Parser(std::string_view text, std::size_t n, const ParameterMap& params) : text_(text), n_(n), params_(params) {}

  RationalFunction parse() {
    auto r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 0, pos_ + 1); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction constant(const Rational& c) const { return RationalFunction::constant(2 * n_, c); }

  RationalFunction symbol(std::size_t index) const { return {Polynomial::variable(2 * n_, index)}; }

  RationalFunction expr() {
    skip_space();
    RationalFunction acc = term();
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RationalFunction d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (!accept('^')) return base;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer literal");
    unsigned long k = std::stoul(std::string(text_.substr(start, pos_ - start)));
    if (k > 64) fail("exponent too large");
    RationalFunction r = constant(1);
    for (unsigned long i = 0; i < k; ++i) r *= base;
    return r;
  }

  RationalFunction primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      try {
        return constant(parse_rational(text_.substr(start, pos_ - start)));
      } catch (const Error&) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (auto idx = lookup(name)) return symbol(*idx);
      if (auto it = params_.find(name); it != params_.end()) return constant(it->second);
      pos_ = start;
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::optional<std::size_t> lookup(const std::string& name) const {
    static const char* aliases[] = {"x", "y", "z"};
    if (n_ <= 3)
      for (std::size_t i = 0; i < n_; ++i) {
        if (name == aliases[i]) return i;
        if (name == std::string("d") + aliases[i]) return n_ + i;
      }
    if (name.size() >= 2 && (name[0] == 'z' || name[0] == 'd')) {
      bool digits = true;
      for (std::size_t k = 1; k < name.size(); ++k) digits = digits && std::isdigit(static_cast<unsigned char>(name[k]));
      if (digits && name[1] != '0') {
        std::size_t i = std::stoul(name.substr(1));
        if (i >= 1 && i <= n_) return (name[0] == 'z' ? 0 : n_) + i - 1;
      }
    }
    return std::nullopt;
  }

  std::string_view text_;
  std::size_t n_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

bool uses_partials(const Polynomial& p, std::size_t n) {
  for (const auto& [mu, c] : p.terms())
    for (std::size_t i = n; i < 2 * n; ++i)
      if (mu[i]) return true;
  return false;
}

Polynomial restrict_to_coordinates(const Polynomial& p, std::size_t n) {
  Polynomial r(n);
  for (const auto& [mu, c] : p.terms()) r.add_term(MultiIndex(mu.begin(), mu.begin() + n), c);
  return r;
}

RationalFunction parse_raw(std::string_view text, std::size_t n, const ParameterMap& params) {
  if (n == 0) throw Error("expressions need at least one variable");
  return Parser(text, n, params).parse();
}

}  // namespace

RationalFunction parse_rational_function(std::string_view text, std::size_t n, const ParameterMap& params) {
  auto raw = parse_raw(text, n, params);
  if (uses_partials(raw.numerator(), n) || uses_partials(raw.denominator(), n))
    throw ParseError("partial-derivative symbol in a function expression", 0, 1);
  return {restrict_to_coordinates(raw.numerator(), n), restrict_to_coordinates(raw.denominator(), n)};
}

Polynomial parse_polynomial(std::string_view text, std::size_t n, const ParameterMap& params) {
  auto f = parse_rational_function(text, n, params);
  auto p = f.as_polynomial();
  if (!p) throw ParseError("non-polynomial expression '" + std::string(text) + "'", 0, 1);
  return *p;
}

DifferentialOperator parse_operator(std::string_view text, std::size_t n, const ParameterMap& params) {
  auto raw = parse_raw(text, n, params);
  auto p = raw.as_polynomial();
  if (!p) throw ParseError("operator coefficients must be polynomial in '" + std::string(text) + "'", 0, 1);
  DifferentialOperator op(n);
  for (const auto& [mu, c] : p->terms()) {
    MultiIndex coeff(mu.begin(), mu.begin() + n), nu(mu.begin() + n, mu.end());
    op.add_term(nu, Polynomial::monomial(coeff, c));
  }
  return op;
}

VectorField parse_vector_field(std::string_view text, std::size_t n, const ParameterMap& params) {
  auto op = parse_operator(text, n, params);
  if (!op.is_vector_field())
    throw ParseError("'" + std::string(text) + "' is not a first-order vector field", 0, 1);
  return VectorField::from_operator(op);
}

std::string variable_name(std::size_t n, std::size_t i) {
  static const char* aliases[] = {"x", "y", "z"};
  return n <= 3 ? std::string(aliases[i]) : "z" + std::to_string(i + 1);
}

std::string partial_name(std::size_t n, std::size_t i) {
  static const char* aliases[] = {"dx", "dy", "dz"};
  return n <= 3 ? std::string(aliases[i]) : "d" + std::to_string(i + 1);
}

namespace {

// "x^2*y" for a monomial, empty for the unit monomial.
std::string monomial_text(const MultiIndex& mu, std::size_t n, bool partials) {
  std::string s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!mu[i]) continue;
    if (!s.empty()) s += "*";
    s += partials ? partial_name(n, i) : variable_name(n, i);
    if (mu[i] > 1) s += "^" + std::to_string(mu[i]);
  }
  return s;
}

std::string magnitude_text(const Rational& c, bool followed) {
  Rational a = abs(c);
  if (a.get_den() == 1) return a.get_str();
  return followed ? "(" + a.get_str() + ")" : a.get_str();
}

// Appends a signed term "c*m" to out.
void append_term(std::string& out, const Rational& c, const std::string& mono) {
  bool negative = c < 0;
  if (out.empty())
    out += negative ? "-" : "";
  else
    out += negative ? " - " : " + ";
  if (mono.empty()) {
    out += magnitude_text(c, false);
  } else {
    if (abs(c) != 1) out += magnitude_text(c, true) + "*";
    out += mono;
  }
}

}  // namespace

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [mu, c] : p.terms()) append_term(out, c, monomial_text(mu, p.dim(), false));
  return out;
}

std::string to_string(const RationalFunction& f) {
  if (f.is_polynomial()) return to_string(*f.as_polynomial());
  return "(" + to_string(f.numerator()) + ")/(" + to_string(f.denominator()) + ")";
}

std::string to_string(const DifferentialOperator& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [nu, a] : p.terms()) {
    std::string d = monomial_text(nu, p.dim(), true);
    if (a.terms().size() == 1) {
      const auto& [mu, c] = *a.terms().begin();
      std::string m = monomial_text(mu, p.dim(), false);
      if (!d.empty()) m = m.empty() ? d : m + "*" + d;
      append_term(out, c, m);
    } else {
      std::string coeff = "(" + to_string(a) + ")";
      out += out.empty() ? "" : " + ";
      out += d.empty() ? coeff : coeff + "*" + d;
    }
  }
  return out;
}

std::string to_string(const VectorField& x) { return to_string(x.to_operator()); }

}  // namespace srkit
