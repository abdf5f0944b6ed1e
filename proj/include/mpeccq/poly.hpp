#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpeccq/errors.hpp"
#include "mpeccq/matrix.hpp"

namespace mpeccq {

/// Ordered variable names; a Poly's exponent vectors index into this list.
class VarSpace {
 public:
  VarSpace() = default;
  explicit VarSpace(std::vector<std::string> names) : names_(std::move(names)) {}
  /// x1..xn, y1..ym, then l1..lq.
  static VarSpace problem(std::size_t n, std::size_t m, std::size_t q = 0);
  /// z1..zd.
  static VarSpace generic(std::size_t d, const std::string& prefix = "z");

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of `name`, or size() when absent.
  std::size_t find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& detail, int line, int column, const std::string& file = "")
      : Error(ErrorCode::ParseError, (file.empty() ? "" : file + ":") + "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + detail),
        detail_(detail), file_(file), line_(line), column_(column) {}
  const std::string& detail() const { return detail_; }
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  ParseError with_file(const std::string& file) const { return ParseError(detail_, line_, column_, file); }

 private:
  std::string detail_, file_;
  int line_, column_;
};

using Exponents = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with exact coefficients; zero terms are never stored.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term.
  Rational constant_term() const;
  unsigned degree() const;
  bool is_affine() const { return degree() <= 1; }
  bool depends_on(std::size_t var) const;

  void add_term(const Exponents& e, const Rational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s);
  Poly pow(unsigned k) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

  Poly differentiate(std::size_t var) const;
  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;
  Vec gradient(std::span<const Rational> point) const;
  Matrix hessian(std::span<const Rational> point) const;

  /// Re-indexes variables: variable i of this becomes variable map[i] of a space of size `nvars`.
  Poly embed(std::size_t nvars, const std::vector<std::size_t>& map) const;
  /// Restricts to the listed variables; throws UNKNOWN_VARIABLE if any other variable occurs.
  Poly select_vars(const std::vector<std::size_t>& vars) const;
  /// Substitutes fixed values for the variables marked in `fixed` (others keep their index).
  Poly substitute(const std::vector<std::optional<Rational>>& fixed) const;

  std::string to_string(const VarSpace& vars) const;

 private:
  std::size_t nvars_ = 0;
  std::map<Exponents, Rational> terms_;
};

/// Expression tree; evaluates in doubles and converts to a Poly when division is by constants only.
class Expr {
 public:
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow };

  static Expr number(const Rational& r);
  static Expr variable(std::size_t i);
  static Expr binary(Kind k, Expr a, Expr b);
  static Expr negate(Expr a);
  static Expr power(Expr a, unsigned k);

  Kind kind() const { return node_->kind; }
  double evaluate(std::span<const double> point) const;
  /// Throws PARSE_ERROR on division by a non-constant.
  Poly to_poly(std::size_t nvars) const;
  std::string to_string(const VarSpace& vars) const;
  bool uses_only(const std::vector<bool>& allowed) const;
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind;
    Rational value;
    std::size_t var = 0;
    unsigned exponent = 0;
    std::vector<Expr> args;
  };
  std::shared_ptr<const Node> node_;
};

/// Parses an expression over `vars`; `line`/`column` locate the text in its source for errors.
Expr parse_expr(std::string_view text, const VarSpace& vars, int line = 1, int column = 1);
Poly parse_poly(std::string_view text, const VarSpace& vars, int line = 1, int column = 1);

}  // namespace mpeccq
