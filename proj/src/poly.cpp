#include "mpeccq/poly.hpp"

#include <cctype>
#include <cmath>

namespace mpeccq {

// ----------------------------------------------------------------- VarSpace

VarSpace VarSpace::problem(std::size_t n, std::size_t m, std::size_t q) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) names.push_back("y" + std::to_string(i));
  for (std::size_t i = 1; i <= q; ++i) names.push_back("l" + std::to_string(i));
  return VarSpace(std::move(names));
}

VarSpace VarSpace::generic(std::size_t d, const std::string& prefix) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= d; ++i) names.push_back(prefix + std::to_string(i));
  return VarSpace(std::move(names));
}

std::size_t VarSpace::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return names_.size();
}

// --------------------------------------------------------------------- Poly

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
  Poly p(nvars);
  Exponents e(nvars, 0);
  e[i] = 1;
  p.add_term(e, 1);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree() == 0);
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Poly::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (auto k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::depends_on(std::size_t var) const {
  for (const auto& [e, c] : terms_)
    if (e[var] != 0) return true;
  return false;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "monomial arity differs from the variable space");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.nvars_ != nvars_) throw Error(ErrorCode::DimensionMismatch, "adding polynomials over different spaces");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.nvars_ != nvars_) throw Error(ErrorCode::DimensionMismatch, "subtracting polynomials over different spaces");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw Error(ErrorCode::DimensionMismatch, "multiplying polynomials over different spaces");
  Poly r(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Poly operator*(Poly a, const Rational& s) {
  if (sgn(s) == 0) return Poly(a.nvars_);
  for (auto& [e, c] : a.terms_) c *= s;
  return a;
}

Poly Poly::pow(unsigned k) const {
  Poly r = constant(nvars_, 1), base = *this;
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Poly Poly::differentiate(std::size_t var) const {
  if (var >= nvars_) throw Error(ErrorCode::DimensionMismatch, "differentiation variable out of range");
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d(e);
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  Rational s;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_ && sgn(t) != 0; ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    s += t;
  }
  return s;
}

double Poly::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  double s = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    s += t;
  }
  return s;
}

Vec Poly::gradient(std::span<const Rational> point) const {
  Vec g(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) g[i] = differentiate(i).evaluate(point);
  return g;
}

Matrix Poly::hessian(std::span<const Rational> point) const {
  Matrix h(nvars_, nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    Poly di = differentiate(i);
    for (std::size_t j = i; j < nvars_; ++j) {
      h(i, j) = di.differentiate(j).evaluate(point);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

Poly Poly::embed(std::size_t nvars, const std::vector<std::size_t>& map) const {
  if (map.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "embedding map has wrong length");
  Poly r(nvars);
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars, 0);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (map[i] >= nvars) throw Error(ErrorCode::DimensionMismatch, "embedding target out of range");
      f[map[i]] += e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

Poly Poly::select_vars(const std::vector<std::size_t>& vars) const {
  std::vector<std::size_t> pos(nvars_, vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) pos[vars[k]] = k;
  Poly r(vars.size());
  for (const auto& [e, c] : terms_) {
    Exponents f(vars.size(), 0);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (pos[i] == vars.size())
        throw Error(ErrorCode::UnknownVariable, "polynomial depends on an excluded variable (index " +
                                                    std::to_string(i) + ")");
      f[pos[i]] = e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

Poly Poly::substitute(const std::vector<std::optional<Rational>>& fixed) const {
  if (fixed.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "substitution has wrong length");
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f(e);
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!fixed[i] || e[i] == 0) continue;
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= *fixed[i];
      f[i] = 0;
    }
    r.add_term(f, t);
  }
  return r;
}

std::string Poly::to_string(const VarSpace& vars) const {
  if (vars.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "variable space has wrong size");
  if (terms_.empty()) return "0";
  std::string s;
  // Highest total degree first, then reverse lexicographic exponent order.
  std::vector<std::pair<const Exponents*, const Rational*>> order;
  for (const auto& [e, c] : terms_) order.emplace_back(&e, &c);
  auto deg = [](const Exponents& e) {
    unsigned d = 0;
    for (auto k : e) d += k;
    return d;
  };
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    unsigned da = deg(*a.first), db = deg(*b.first);
    if (da != db) return da > db;
    return *a.first > *b.first;
  });
  bool first = true;
  for (const auto& [ep, cp] : order) {
    const Exponents& e = *ep;
    Rational c = *cp;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars.name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      s += c.get_str();
    else if (c == 1)
      s += mono;
    else
      s += c.get_str() + "*" + mono;
  }
  return s;
}

// --------------------------------------------------------------------- Expr

Expr Expr::number(const Rational& r) {
  Expr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Number, r, 0, 0, {}});
  return e;
}

Expr Expr::variable(std::size_t i) {
  Expr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Variable, 0, i, 0, {}});
  return e;
}

Expr Expr::binary(Kind k, Expr a, Expr b) {
  Expr e;
  e.node_ = std::make_shared<Node>(Node{k, 0, 0, 0, {std::move(a), std::move(b)}});
  return e;
}

Expr Expr::negate(Expr a) {
  Expr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Neg, 0, 0, 0, {std::move(a)}});
  return e;
}

Expr Expr::power(Expr a, unsigned k) {
  Expr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Pow, 0, 0, k, {std::move(a)}});
  return e;
}

double Expr::evaluate(std::span<const double> point) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Number: return n.value.get_d();
    case Kind::Variable: return point[n.var];
    case Kind::Add: return n.args[0].evaluate(point) + n.args[1].evaluate(point);
    case Kind::Sub: return n.args[0].evaluate(point) - n.args[1].evaluate(point);
    case Kind::Mul: return n.args[0].evaluate(point) * n.args[1].evaluate(point);
    case Kind::Div: return n.args[0].evaluate(point) / n.args[1].evaluate(point);
    case Kind::Neg: return -n.args[0].evaluate(point);
    case Kind::Pow: return std::pow(n.args[0].evaluate(point), static_cast<double>(n.exponent));
  }
  return 0;
}

Poly Expr::to_poly(std::size_t nvars) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Number: return Poly::constant(nvars, n.value);
    case Kind::Variable: return Poly::variable(nvars, n.var);
    case Kind::Add: return n.args[0].to_poly(nvars) + n.args[1].to_poly(nvars);
    case Kind::Sub: return n.args[0].to_poly(nvars) - n.args[1].to_poly(nvars);
    case Kind::Mul: return n.args[0].to_poly(nvars) * n.args[1].to_poly(nvars);
    case Kind::Div: {
      Poly d = n.args[1].to_poly(nvars);
      if (!d.is_constant()) throw Error(ErrorCode::ParseError, "division by a non-constant expression");
      if (d.is_zero()) throw Error(ErrorCode::ParseError, "division by zero");
      return n.args[0].to_poly(nvars) * (1 / d.constant_term());
    }
    case Kind::Neg: return -n.args[0].to_poly(nvars);
    case Kind::Pow: return n.args[0].to_poly(nvars).pow(n.exponent);
  }
  return Poly(nvars);
}

std::string Expr::to_string(const VarSpace& vars) const {
  const Node& n = *node_;
  auto wrap = [&](const Expr& e) { return "(" + e.to_string(vars) + ")"; };
  switch (n.kind) {
    case Kind::Number: return sgn(n.value) < 0 ? "(" + n.value.get_str() + ")" : n.value.get_str();
    case Kind::Variable: return vars.name(n.var);
    case Kind::Add: return wrap(n.args[0]) + " + " + wrap(n.args[1]);
    case Kind::Sub: return wrap(n.args[0]) + " - " + wrap(n.args[1]);
    case Kind::Mul: return wrap(n.args[0]) + "*" + wrap(n.args[1]);
    case Kind::Div: return wrap(n.args[0]) + "/" + wrap(n.args[1]);
    case Kind::Neg: return "-" + wrap(n.args[0]);
    case Kind::Pow: return wrap(n.args[0]) + "^" + std::to_string(n.exponent);
  }
  return "";
}

bool Expr::uses_only(const std::vector<bool>& allowed) const {
  const Node& n = *node_;
  if (n.kind == Kind::Variable) return n.var < allowed.size() && allowed[n.var];
  for (const auto& a : n.args)
    if (!a.uses_only(allowed)) return false;
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.var != y.var || x.exponent != y.exponent || x.value != y.value) return false;
  if (x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!(x.args[i] == y.args[i])) return false;
  return true;
}

// ------------------------------------------------------------------- parser

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const VarSpace& vars, int line, int column)
      : s_(text), vars_(vars), line_(line), col0_(column) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    while (true) {
      if (eat('+'))
        lhs = Expr::binary(Expr::Kind::Add, lhs, parse_product());
      else if (eat('-'))
        lhs = Expr::binary(Expr::Kind::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    while (true) {
      if (eat('*'))
        lhs = Expr::binary(Expr::Kind::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = Expr::binary(Expr::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return Expr::negate(parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!eat('^')) return base;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a nonnegative integer literal");
    std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 4) fail("exponent too large");
    Expr e = Expr::power(base, static_cast<unsigned>(std::stoul(digits)));
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') fail("chained '^' is ambiguous; use parentheses");
    return e;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      std::size_t idx = vars_.find(name);
      if (idx == vars_.size()) {
        pos_ = start;
        throw Error(ErrorCode::UnknownVariable, "line " + std::to_string(line_) + ", column " +
                                                    std::to_string(col0_ + static_cast<int>(start)) +
                                                    ": unknown variable '" + name + "'");
      }
      return Expr::variable(idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      std::size_t ds = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (ds == pos_) pos_ = save;
    }
    try {
      return Expr::number(parse_rational(s_.substr(start, pos_ - start)));
    } catch (const Error&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  std::string_view s_;
  const VarSpace& vars_;
  int line_, col0_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const VarSpace& vars, int line, int column) {
  return ExprParser(text, vars, line, column).parse();
}

Poly parse_poly(std::string_view text, const VarSpace& vars, int line, int column) {
  Expr e = parse_expr(text, vars, line, column);
  try {
    return e.to_poly(vars.size());
  } catch (const Error& err) {
    throw ParseError(std::string(err.what()).substr(std::string("PARSE_ERROR: ").size()), line, column);
  }
}

}  // namespace mpeccq
