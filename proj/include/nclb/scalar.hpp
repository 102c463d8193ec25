#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <complex>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "nclb/errors.hpp"

namespace nclb {

using Rat = boost::multiprecision::cpp_rational;

// Element of Q(i): re + im*i with exact rational parts.
struct GaussRat {
  Rat re{0};
  Rat im{0};

  GaussRat() = default;
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussRat(long long n) : re(n), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  GaussRat conj() const { return {re, -im}; }

  GaussRat inv() const {
    Rat n = re * re + im * im;
    if (n == 0) fail(errc::division_by_zero, "inverse of 0 in Q(i)");
    return {re / n, -im / n};
  }

  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) { return a * b.inv(); }
};

// Polynomial in q over Q(i); poly[k] is the coefficient of q^k.
// Invariant: no trailing zero coefficients; the zero polynomial is empty.
using Poly = std::vector<GaussRat>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline bool poly_is_zero(const Poly& p) { return p.empty(); }

inline int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly poly_const(GaussRat c) {
  Poly p;
  if (!c.is_zero()) p.push_back(std::move(c));
  return p;
}

inline Poly poly_one() { return poly_const(GaussRat(1)); }

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k < a.size()) r[k] = r[k] + a[k];
    if (k < b.size()) r[k] = r[k] + b[k];
  }
  poly_trim(r);
  return r;
}

inline Poly poly_neg(const Poly& a) {
  Poly r = a;
  for (auto& c : r) c = -c;
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k) r[j + k] = r[j + k] + a[j] * b[k];
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, const GaussRat& c) {
  if (c.is_zero()) return {};
  Poly r = a;
  for (auto& x : r) x = x * c;
  return r;
}

inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  Poly rem = a;
  Poly quot;
  if (!b.empty() && rem.size() >= b.size()) quot.assign(rem.size() - b.size() + 1, GaussRat(0));
  GaussRat lead_inv = b.back().inv();
  while (rem.size() >= b.size() && !rem.empty()) {
    std::size_t shift = rem.size() - b.size();
    GaussRat f = rem.back() * lead_inv;
    quot[shift] = quot[shift] + f;
    for (std::size_t k = 0; k < b.size(); ++k)
      rem[shift + k] = rem[shift + k] - f * b[k];
    poly_trim(rem);
  }
  poly_trim(quot);
  return {quot, rem};
}

inline Poly poly_monic(const Poly& a) {
  if (a.empty()) return a;
  return poly_scale(a, a.back().inv());
}

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

inline Poly poly_conj(const Poly& a) {
  Poly r = a;
  for (auto& c : r) c = c.conj();
  return r;
}

inline GaussRat poly_eval(const Poly& p, const Rat& q0) {
  GaussRat acc(0);
  for (std::size_t k = p.size(); k-- > 0;) {
    acc = GaussRat{acc.re * q0, acc.im * q0} + p[k];
  }
  return acc;
}

// Element of Q(i)(q) in canonical form: den monic, gcd(num, den) = 1.
// Canonical form is unique, so operator== is exact field equality.
struct Scalar {
  Poly num;
  Poly den{poly_one()};

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  bool is_zero() const { return num.empty(); }
  bool is_one() const { return num == poly_one() && den == poly_one(); }
};

inline Scalar make_fraction(Poly num, Poly den) {
  if (poly_is_zero(den)) fail(errc::division_by_zero, "zero denominator");
  if (poly_is_zero(num)) return Scalar{{}, poly_one()};
  Poly g = poly_gcd(num, den);
  num = poly_divmod(num, g).first;
  den = poly_divmod(den, g).first;
  GaussRat lead_inv = den.back().inv();
  return Scalar{poly_scale(num, lead_inv), poly_scale(den, lead_inv)};
}

inline Scalar scalar_int(long long n) { return Scalar{poly_const(GaussRat(n)), poly_one()}; }
inline Scalar scalar_zero() { return scalar_int(0); }
inline Scalar scalar_one() { return scalar_int(1); }
inline Scalar scalar_i() { return Scalar{poly_const(GaussRat{Rat(0), Rat(1)}), poly_one()}; }
inline Scalar scalar_gauss(GaussRat c) { return Scalar{poly_const(std::move(c)), poly_one()}; }

inline Scalar scalar_q_power(long long k) {
  Poly mono(static_cast<std::size_t>(std::llabs(k)) + 1, GaussRat(0));
  mono.back() = GaussRat(1);
  if (k >= 0) return Scalar{mono, poly_one()};
  return Scalar{poly_one(), mono};
}

inline Scalar operator+(const Scalar& a, const Scalar& b) {
  return make_fraction(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                       poly_mul(a.den, b.den));
}

inline Scalar operator-(const Scalar& a) { return Scalar{poly_neg(a.num), a.den}; }

inline Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

inline Scalar operator*(const Scalar& a, const Scalar& b) {
  return make_fraction(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

inline Scalar scalar_inv(const Scalar& a) {
  if (a.is_zero()) fail(errc::division_by_zero, "inverse of 0");
  return make_fraction(a.den, a.num);
}

inline Scalar operator/(const Scalar& a, const Scalar& b) { return a * scalar_inv(b); }

inline Scalar scalar_conj(const Scalar& a) {
  // Conjugation fixes q and negates i.  A monic denominator stays monic, and
  // gcd-freeness survives a field automorphism, so the form stays canonical.
  return Scalar{poly_conj(a.num), poly_conj(a.den)};
}

inline Scalar scalar_pow(Scalar base, long long n) {
  if (n < 0) {
    base = scalar_inv(base);
    n = -n;
  }
  Scalar acc = scalar_one();
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

inline std::complex<double> scalar_eval(const Scalar& s, double q0) {
  Rat q = Rat(q0);
  GaussRat den = poly_eval(s.den, q);
  if (den.is_zero()) fail(errc::pole_at_q0, "denominator vanishes at q0");
  GaussRat v = poly_eval(s.num, q) / den;
  return {v.re.convert_to<double>(), v.im.convert_to<double>()};
}

// ---- printing ----

namespace detail {

inline std::string rat_str(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

// Formats a coefficient together with its sign, for joining with " + "/" - ".
// mixed complex values keep an explicit leading sign inside parentheses.
struct CoeffText {
  bool negative;
  std::string magnitude;  // without sign
  bool is_unit;           // magnitude == "1"
};

inline CoeffText coeff_text(const GaussRat& c) {
  if (c.im == 0) {
    Rat a = c.re < 0 ? Rat(-c.re) : c.re;
    return {c.re < 0, rat_str(a), a == 1};
  }
  if (c.re == 0) {
    Rat b = c.im < 0 ? Rat(-c.im) : c.im;
    std::string m = (b == 1) ? "i" : rat_str(b) + "*i";
    return {c.im < 0, m, false};
  }
  std::string inner = rat_str(c.re);
  inner += (c.im < 0) ? " - " : " + ";
  Rat b = c.im < 0 ? Rat(-c.im) : c.im;
  inner += (b == 1) ? "i" : rat_str(b) + "*i";
  return {false, "(" + inner + ")", false};
}

inline std::string q_power_str(long long k) {
  if (k == 0) return "";
  if (k == 1) return "q";
  return "q^" + std::to_string(k);
}

// Prints sum of coeff*q^(k+shift) over nonzero coefficients, descending power.
inline std::string laurent_str(const Poly& p, long long shift) {
  std::string out;
  bool first = true;
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k].is_zero()) continue;
    CoeffText c = coeff_text(p[k]);
    std::string mono = q_power_str(static_cast<long long>(k) + shift);
    std::string body;
    if (mono.empty())
      body = c.magnitude;
    else if (c.is_unit)
      body = mono;
    else
      body = c.magnitude + "*" + mono;
    if (first) {
      out += (c.negative ? "-" : "") + body;
      first = false;
    } else {
      out += (c.negative ? " - " : " + ") + body;
    }
  }
  return out.empty() ? "0" : out;
}

inline int poly_term_count(const Poly& p) {
  int n = 0;
  for (const auto& c : p)
    if (!c.is_zero()) ++n;
  return n;
}

inline bool is_monomial(const Poly& p) { return poly_term_count(p) == 1; }

}  // namespace detail

inline std::string to_string(const Scalar& s) {
  if (s.is_zero()) return "0";
  // A q-power denominator folds into a Laurent polynomial.
  if (detail::is_monomial(s.den) && s.den.back() == GaussRat(1))
    return detail::laurent_str(s.num, -poly_deg(s.den));
  std::string num = detail::laurent_str(s.num, 0);
  std::string den = detail::laurent_str(s.den, 0);
  if (detail::poly_term_count(s.num) > 1) num = "(" + num + ")";
  if (detail::poly_term_count(s.den) > 1 || detail::is_monomial(s.den)) den = "(" + den + ")";
  return num + "/" + den;
}

// ---- parsing ----

namespace detail {

struct Lexer {
  std::string text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(errc::parse_error, std::string("expected '") + c + "' in \"" + text + "\"");
  }

  bool peek_digit() {
    skip_ws();
    return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
  }

  long long read_int() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail(errc::parse_error, "expected integer in \"" + text + "\"");
    return std::stoll(text.substr(start, pos - start));
  }

  // Name: letters, digits, underscores; must start with a letter or underscore.
  bool peek_name() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string read_name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
        ++pos;
      else
        break;
    }
    if (pos == start) fail(errc::parse_error, "expected name in \"" + text + "\"");
    return text.substr(start, pos - start);
  }
};

inline long long parse_exponent(Lexer& lx);
inline Scalar parse_scalar_expr(Lexer& lx);

inline Scalar parse_scalar_atom(Lexer& lx) {
  if (lx.accept('(')) {
    Scalar inner = parse_scalar_expr(lx);
    lx.expect(')');
    return inner;
  }
  if (lx.peek_digit()) return scalar_int(lx.read_int());
  if (lx.peek_name()) {
    std::string name = lx.read_name();
    if (name == "q") return scalar_q_power(1);
    if (name == "i") return scalar_i();
    fail(errc::parse_error, "unknown symbol '" + name + "' in scalar");
  }
  fail(errc::parse_error, "unexpected input in \"" + lx.text + "\"");
}

inline long long parse_exponent(Lexer& lx) {
  bool neg = lx.accept('-');
  if (lx.accept('(')) {
    bool neg2 = lx.accept('-');
    long long v = lx.read_int();
    lx.expect(')');
    return (neg != neg2) ? -v : v;
  }
  long long v = lx.read_int();
  return neg ? -v : v;
}

inline Scalar parse_scalar_factor(Lexer& lx) {
  Scalar a = parse_scalar_atom(lx);
  if (lx.accept('^')) a = scalar_pow(a, parse_exponent(lx));
  return a;
}

inline bool starts_scalar_atom(Lexer& lx) {
  char c = lx.peek();
  return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || lx.peek_name();
}

inline Scalar parse_scalar_term(Lexer& lx) {
  Scalar acc = parse_scalar_factor(lx);
  for (;;) {
    if (lx.accept('*')) {
      acc = acc * parse_scalar_factor(lx);
    } else if (lx.accept('/')) {
      acc = acc / parse_scalar_factor(lx);
    } else if (starts_scalar_atom(lx)) {
      acc = acc * parse_scalar_factor(lx);  // juxtaposition
    } else {
      return acc;
    }
  }
}

inline Scalar parse_scalar_expr(Lexer& lx) {
  bool neg = lx.accept('-');
  Scalar acc = parse_scalar_term(lx);
  if (neg) acc = -acc;
  for (;;) {
    if (lx.accept('+'))
      acc = acc + parse_scalar_term(lx);
    else if (lx.accept('-'))
      acc = acc - parse_scalar_term(lx);
    else
      return acc;
  }
}

}  // namespace detail

inline Scalar parse_scalar(const std::string& text) {
  detail::Lexer lx{text};
  Scalar s = detail::parse_scalar_expr(lx);
  if (!lx.eof()) fail(errc::parse_error, "trailing input in \"" + text + "\"");
  return s;
}

}  // namespace nclb
