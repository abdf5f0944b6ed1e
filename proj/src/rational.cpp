#include "mpeccq/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "mpeccq/errors.hpp"

namespace mpeccq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  auto fail = [&] { throw Error(ErrorCode::ParseError, "bad number '" + std::string(original) + "'"); };
  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    std::string_view ex = s.substr(epos + 1);
    bool neg = false;
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
      neg = ex[0] == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) fail();
    exponent = std::stol(std::string(ex));
    if (neg) exponent = -exponent;
    s = s.substr(0, epos);
  }
  std::string digits;
  auto dot = s.find('.');
  if (dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) fail();
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) fail();
    digits = std::string(s);
  }
  if (digits.empty()) fail();
  Rational r(mpz_class(digits, 10));
  r *= pow10(exponent);
  r.canonicalize();
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.remove_prefix(1);
    s = trim(s);
  }
  Rational r;
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash)), den = trim(s.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den))
      throw Error(ErrorCode::ParseError, "bad fraction '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    r = Rational(mpz_class(std::string(num), 10), d);
    r.canonicalize();
  } else {
    r = parse_decimal(s, text);
  }
  return neg ? Rational(-r) : r;
}

Vec parse_rational_list(std::string_view text) {
  Vec out;
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = trim(s.substr(1, s.size() - 2));
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(parse_rational(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(std::span<const Rational> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + "]";
}

Vec zeros(std::size_t n) { return Vec(n); }

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

static void check_same(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch, "vector sizes " + std::to_string(a) + " and " + std::to_string(b));
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  check_same(a.size(), b.size());
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

Vec add(std::span<const Rational> a, std::span<const Rational> b) {
  check_same(a.size(), b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(std::span<const Rational> a, std::span<const Rational> b) {
  check_same(a.size(), b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scaled(std::span<const Rational> a, const Rational& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

void axpy(Vec& y, const Rational& s, std::span<const Rational> x) {
  check_same(y.size(), x.size());
  if (sgn(s) == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (sgn(x[i]) != 0) y[i] += s * x[i];
}

bool is_zero(std::span<const Rational> v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Rational l1_norm(std::span<const Rational> v) {
  Rational s;
  for (const auto& x : v) s += abs(x);
  return s;
}

Rational squared_norm(std::span<const Rational> v) { return dot(v, v); }

Vec concat(std::span<const Rational> a, std::span<const Rational> b) {
  Vec r(a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Vec primitive(std::span<const Rational> v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = v[i] * l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_num_mpz_t());
  }
  if (g == 0) return r;
  for (auto& x : r) {
    x /= g;
    x.canonicalize();
  }
  return r;
}

std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_d();
  return r;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, "non-finite value");
  return Rational(x);
}

}  // namespace mpeccq
