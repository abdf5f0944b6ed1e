#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpeccq {

/// Exact rational scalar. GMP keeps every value canonical (lowest terms, positive
/// denominator) after each operation.
using Rational = mpq_class;
using Vec = std::vector<Rational>;

/// Accepts "p", "p/q", decimals ("0.25", "-1.5e-3"). Decimals are converted exactly.
Rational parse_rational(std::string_view text);
/// Comma-separated list of rational literals, e.g. "1/2,1/2".
Vec parse_rational_list(std::string_view text);

std::string to_string(const Rational& r);
std::string to_string(std::span<const Rational> v);

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Vec add(std::span<const Rational> a, std::span<const Rational> b);
Vec sub(std::span<const Rational> a, std::span<const Rational> b);
Vec scaled(std::span<const Rational> a, const Rational& s);
/// y += s * x
void axpy(Vec& y, const Rational& s, std::span<const Rational> x);
bool is_zero(std::span<const Rational> v);
Rational l1_norm(std::span<const Rational> v);
Rational squared_norm(std::span<const Rational> v);
Vec concat(std::span<const Rational> a, std::span<const Rational> b);

/// Positive multiple of `v` with coprime integer entries; zero stays zero.
Vec primitive(std::span<const Rational> v);

std::vector<double> to_double(std::span<const Rational> v);
/// Exact rational equal to the binary double `x`.
Rational from_double(double x);

}  // namespace mpeccq
