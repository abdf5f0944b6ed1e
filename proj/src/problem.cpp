#include "mpeccq/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "mpeccq/lp.hpp"

namespace mpeccq {

// ------------------------------------------------------------ accessors

std::vector<Poly> MpecProblem::g_in_y() const {
  std::vector<std::size_t> ys;
  for (std::size_t j = 0; j < m; ++j) ys.push_back(n + j);
  std::vector<Poly> out;
  for (const auto& gi : g) out.push_back(gi.select_vars(ys));
  return out;
}

Vec MpecProblem::phi_at() const {
  Vec z = point();
  Vec r;
  for (const auto& f : phi) r.push_back(f.evaluate(z));
  return r;
}

Vec MpecProblem::ystar() const { return scaled(phi_at(), Rational(-1)); }

Vec MpecProblem::g_at(std::span<const Rational> yy) const {
  Vec z = point(x, yy);
  Vec r;
  for (const auto& f : g) r.push_back(f.evaluate(z));
  return r;
}

Vec MpecProblem::G_at() const {
  Vec z = point();
  Vec r;
  for (const auto& f : G) r.push_back(f.evaluate(z));
  return r;
}

namespace {

Matrix jacobian(const std::vector<Poly>& fs, std::span<const Rational> z, std::size_t first, std::size_t count) {
  Matrix j(fs.size(), count);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < count; ++k) j(i, k) = fs[i].differentiate(first + k).evaluate(z);
  return j;
}

}  // namespace

Matrix MpecProblem::grad_g(std::span<const Rational> yy) const { return jacobian(g, point(x, yy), n, m); }

Matrix MpecProblem::hess_lambda_g(std::span<const Rational> lambda, std::span<const Rational> yy) const {
  if (lambda.size() != q) throw Error(ErrorCode::DimensionMismatch, "multiplier has wrong length");
  Vec z = point(x, yy);
  Matrix h(m, m);
  for (std::size_t i = 0; i < q; ++i) {
    if (sgn(lambda[i]) == 0) continue;
    for (std::size_t a = 0; a < m; ++a) {
      Poly da = g[i].differentiate(n + a);
      for (std::size_t b = 0; b < m; ++b) h(a, b) += lambda[i] * da.differentiate(n + b).evaluate(z);
    }
  }
  return h;
}

Matrix MpecProblem::jac_phi_x() const { return jacobian(phi, point(), 0, n); }
Matrix MpecProblem::jac_phi_y() const { return jacobian(phi, point(), n, m); }
Matrix MpecProblem::jac_G_x() const { return jacobian(G, point(), 0, n); }
Matrix MpecProblem::jac_G_y() const { return jacobian(G, point(), n, m); }

void MpecProblem::check() const {
  auto expect = [](std::size_t got, std::size_t want, const std::string& what) {
    if (got != want)
      throw Error(ErrorCode::DimensionMismatch,
                  what + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
  };
  expect(phi.size(), m, "phi");
  expect(g.size(), q, "g");
  expect(G.size(), p, "G");
  expect(x.size(), n, "point x");
  expect(y.size(), m, "point y");
  std::size_t nv = n + m;
  for (const auto* fam : {&phi, &g, &G})
    for (const auto& f : *fam)
      if (f.nvars() != nv) throw Error(ErrorCode::DimensionMismatch, "polynomial over the wrong variable space");
  if (F && F->nvars() != nv) throw Error(ErrorCode::DimensionMismatch, "objective over the wrong variable space");
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g[i].depends_on(j))
        throw Error(ErrorCode::UnknownVariable,
                    "g" + std::to_string(i + 1) + " depends on x" + std::to_string(j + 1) + "; g may use y only");
  for (const auto& piece : solution_map) {
    expect(piece.y.size(), m, "solution_map y");
    expect(piece.lambda.size(), q, "solution_map lambda");
  }
}

// ----------------------------------------------------------- file reader

namespace {

struct RawValue {
  enum class Kind { String, Bare, Array } kind = Kind::Bare;
  std::string text;
  int line = 0, column = 0;
  std::vector<RawValue> items;
};

struct RawSection {
  std::string name;
  bool repeated = false;
  int line = 0;
  std::vector<std::pair<std::string, RawValue>> entries;
};

class FileReader {
 public:
  explicit FileReader(std::string_view text) : s_(text) {}

  std::vector<RawSection> read() {
    std::vector<RawSection> out;
    while (true) {
      skip_blank();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] == '[') {
        out.push_back(read_header());
        continue;
      }
      if (out.empty()) fail("assignment outside of a section");
      auto key = read_key();
      skip_inline_ws();
      if (!consume('=')) fail("expected '='");
      skip_inline_ws();
      int kl = line_, kc = col();
      RawValue v = read_value();
      for (const auto& [k, existing] : out.back().entries)
        if (k == key) throw ParseError("duplicate key '" + key + "'", kl, kc);
      out.back().entries.emplace_back(key, std::move(v));
      end_of_line();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col()); }
  int col() const { return static_cast<int>(pos_ - line_start_) + 1; }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }
  bool consume(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }
  void skip_inline_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) advance();
  }
  void skip_comment() {
    if (pos_ < s_.size() && s_[pos_] == '#')
      while (pos_ < s_.size() && s_[pos_] != '\n') advance();
  }
  void skip_blank() {
    while (pos_ < s_.size()) {
      skip_inline_ws();
      skip_comment();
      if (pos_ < s_.size() && s_[pos_] == '\n')
        advance();
      else
        break;
    }
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (pos_ < s_.size() && s_[pos_] != '\n') fail("unexpected text after value");
  }

  RawSection read_header() {
    RawSection sec;
    sec.line = line_;
    advance();
    sec.repeated = consume('[');
    skip_inline_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) advance();
    sec.name = std::string(s_.substr(start, pos_ - start));
    if (sec.name.empty()) fail("expected section name");
    skip_inline_ws();
    if (!consume(']') || (sec.repeated && !consume(']'))) fail("malformed section header");
    end_of_line();
    return sec;
  }

  std::string read_key() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) advance();
    if (start == pos_) fail("expected key");
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip_array_ws() {
    while (true) {
      skip_blank();
      if (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n')) continue;
      return;
    }
  }

  RawValue read_value() {
    RawValue v;
    v.line = line_;
    v.column = col();
    if (pos_ >= s_.size()) fail("expected value");
    if (s_[pos_] == '"') {
      v.kind = RawValue::Kind::String;
      advance();
      v.column = col();
      while (true) {
        if (pos_ >= s_.size() || s_[pos_] == '\n') fail("unterminated string");
        if (s_[pos_] == '"') {
          advance();
          break;
        }
        if (s_[pos_] == '\\') {
          advance();
          if (pos_ >= s_.size()) fail("unterminated string");
        }
        v.text += s_[pos_];
        advance();
      }
      return v;
    }
    if (s_[pos_] == '[') {
      v.kind = RawValue::Kind::Array;
      advance();
      skip_array_ws();
      if (consume(']')) return v;
      while (true) {
        skip_array_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          advance();
          return v;
        }
        v.items.push_back(read_value());
        if (v.items.back().kind == RawValue::Kind::Array) fail("nested arrays are not supported");
        skip_array_ws();
        if (consume(',')) continue;
        if (consume(']')) return v;
        fail("expected ',' or ']'");
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '\n' && s_[pos_] != '#') advance();
    std::string t(s_.substr(start, pos_ - start));
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (t.empty()) fail("expected value");
    v.text = t;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0, line_start_ = 0;
  int line_ = 1;
};

const RawValue* find(const RawSection& s, const std::string& key) {
  for (const auto& [k, v] : s.entries)
    if (k == key) return &v;
  return nullptr;
}

void allow_keys(const RawSection& s, std::set<std::string> keys) {
  for (const auto& [k, v] : s.entries)
    if (!keys.count(k)) throw ParseError("unknown key '" + k + "' in [" + s.name + "]", v.line, v.column);
}

std::size_t as_count(const RawValue& v) {
  if (v.kind == RawValue::Kind::Array) throw ParseError("expected a nonnegative integer", v.line, v.column);
  for (char c : v.text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("expected a nonnegative integer", v.line, v.column);
  if (v.text.size() > 6) throw ParseError("dimension too large", v.line, v.column);
  return std::stoul(v.text);
}

Rational as_rational(const RawValue& v) {
  if (v.kind == RawValue::Kind::Array) throw ParseError("expected a number", v.line, v.column);
  try {
    return parse_rational(v.text);
  } catch (const Error&) {
    throw ParseError("malformed number '" + v.text + "'", v.line, v.column);
  }
}

const std::vector<RawValue>& as_array(const RawValue& v) {
  if (v.kind != RawValue::Kind::Array) throw ParseError("expected an array", v.line, v.column);
  return v.items;
}

const RawValue& as_string(const RawValue& v) {
  if (v.kind != RawValue::Kind::String) throw ParseError("expected a quoted string", v.line, v.column);
  return v;
}

Expr region_expr(const RawValue& v, const VarSpace& xs) {
  const std::string& t = as_string(v).text;
  auto le = t.find("<=");
  auto ge = t.find(">=");
  if ((le == std::string::npos) == (ge == std::string::npos))
    throw ParseError("region entries must have the form 'lhs <= rhs' or 'lhs >= rhs'", v.line, v.column);
  std::size_t at = le != std::string::npos ? le : ge;
  Expr lhs = parse_expr(std::string_view(t).substr(0, at), xs, v.line, v.column);
  Expr rhs = parse_expr(std::string_view(t).substr(at + 2), xs, v.line, v.column + static_cast<int>(at) + 2);
  bool rhs_zero = rhs.kind() == Expr::Kind::Number && rhs == Expr::number(0);
  if (le != std::string::npos) return rhs_zero ? lhs : Expr::binary(Expr::Kind::Sub, lhs, rhs);
  return Expr::binary(Expr::Kind::Sub, rhs, lhs);
}

}  // namespace

MpecProblem parse_problem(std::string_view text) {
  auto sections = FileReader(text).read();
  MpecProblem p;
  const RawSection *dims = nullptr, *funcs = nullptr, *point = nullptr, *meta = nullptr;
  std::vector<const RawSection*> pieces;
  for (const auto& s : sections) {
    const RawSection** slot = nullptr;
    if (s.name == "solution_map" && s.repeated) {
      pieces.push_back(&s);
      continue;
    }
    if (s.repeated) throw ParseError("only [[solution_map]] may repeat", s.line, 1);
    if (s.name == "dims") slot = &dims;
    else if (s.name == "functions") slot = &funcs;
    else if (s.name == "point") slot = &point;
    else if (s.name == "meta") slot = &meta;
    else throw ParseError("unknown section [" + s.name + "]", s.line, 1);
    if (*slot) throw ParseError("duplicate section [" + s.name + "]", s.line, 1);
    *slot = &s;
  }
  if (!dims) throw ParseError("missing [dims] section", 1, 1);
  if (!funcs) throw ParseError("missing [functions] section", 1, 1);
  if (!point) throw ParseError("missing [point] section", 1, 1);

  if (meta) {
    allow_keys(*meta, {"name"});
    if (auto v = find(*meta, "name")) p.name = as_string(*v).text;
  }
  allow_keys(*dims, {"n", "m", "p", "q"});
  for (auto [key, slot] : {std::pair{"n", &p.n}, {"m", &p.m}, {"p", &p.p}, {"q", &p.q}}) {
    auto v = find(*dims, key);
    if (!v) throw ParseError(std::string("missing dimension '") + key + "'", dims->line, 1);
    *slot = as_count(*v);
  }

  VarSpace vars = p.vars();
  auto poly_list = [&](const char* key, std::size_t want) {
    std::vector<Poly> out;
    auto v = find(*funcs, key);
    if (!v) {
      if (want == 0) return out;
      throw ParseError(std::string("missing function list '") + key + "'", funcs->line, 1);
    }
    for (const auto& item : as_array(*v)) {
      as_string(item);
      out.push_back(parse_poly(item.text, vars, item.line, item.column));
    }
    if (out.size() != want)
      throw Error(ErrorCode::DimensionMismatch, std::string(key) + " has " + std::to_string(out.size()) +
                                                    " entries, expected " + std::to_string(want) + " (line " +
                                                    std::to_string(v->line) + ")");
    return out;
  };
  allow_keys(*funcs, {"phi", "g", "G", "F"});
  p.phi = poly_list("phi", p.m);
  p.g = poly_list("g", p.q);
  p.G = poly_list("G", p.p);
  if (auto v = find(*funcs, "F")) p.F = parse_poly(as_string(*v).text, vars, v->line, v->column);

  allow_keys(*point, {"x", "y"});
  auto vec = [&](const char* key, std::size_t want) {
    Vec out;
    auto v = find(*point, key);
    if (!v) {
      if (want == 0) return out;
      throw ParseError(std::string("missing point coordinates '") + key + "'", point->line, 1);
    }
    for (const auto& item : as_array(*v)) out.push_back(as_rational(item));
    if (out.size() != want)
      throw Error(ErrorCode::DimensionMismatch, std::string("point ") + key + " has " + std::to_string(out.size()) +
                                                    " entries, expected " + std::to_string(want));
    return out;
  };
  p.x = vec("x", p.n);
  p.y = vec("y", p.m);

  VarSpace xs = VarSpace::problem(p.n, 0);
  for (const RawSection* s : pieces) {
    allow_keys(*s, {"region", "y", "lambda"});
    SolutionPiece piece;
    if (auto v = find(*s, "region"))
      for (const auto& item : as_array(*v)) piece.region.push_back(region_expr(item, xs));
    auto exprs = [&](const char* key, std::size_t want) {
      std::vector<Expr> out;
      auto v = find(*s, key);
      if (!v) {
        if (want == 0) return out;
        throw ParseError(std::string("solution_map entry missing '") + key + "'", s->line, 1);
      }
      for (const auto& item : as_array(*v)) {
        as_string(item);
        out.push_back(parse_expr(item.text, xs, item.line, item.column));
      }
      if (out.size() != want)
        throw Error(ErrorCode::DimensionMismatch, std::string("solution_map ") + key + " has " +
                                                      std::to_string(out.size()) + " entries, expected " +
                                                      std::to_string(want));
      return out;
    };
    piece.y = exprs("y", p.m);
    piece.lambda = exprs("lambda", p.q);
    p.solution_map.push_back(std::move(piece));
  }
  p.check();
  return p;
}

MpecProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, "cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const ParseError& e) {
    throw e.with_file(path);
  }
}

std::string serialize_problem(const MpecProblem& p) {
  VarSpace vars = p.vars(), xs = VarSpace::problem(p.n, 0);
  std::ostringstream o;
  auto quoted_list = [&](const std::vector<std::string>& items) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", \"" : "\"") + items[i] + "\"";
    return s + "]";
  };
  auto polys = [&](const std::vector<Poly>& ps) {
    std::vector<std::string> t;
    for (const auto& f : ps) t.push_back(f.to_string(vars));
    return quoted_list(t);
  };
  auto exprs = [&](const std::vector<Expr>& es, const char* suffix) {
    std::vector<std::string> t;
    for (const auto& e : es) t.push_back(e.to_string(xs) + suffix);
    return quoted_list(t);
  };
  auto nums = [&](const Vec& v) {
    std::vector<std::string> t;
    for (const auto& r : v) t.push_back(r.get_str());
    return quoted_list(t);
  };
  if (!p.name.empty()) o << "[meta]\nname = \"" << p.name << "\"\n\n";
  o << "[dims]\nn = " << p.n << "\nm = " << p.m << "\np = " << p.p << "\nq = " << p.q << "\n\n";
  o << "[functions]\nphi = " << polys(p.phi) << "\ng = " << polys(p.g) << "\nG = " << polys(p.G) << "\n";
  if (p.F) o << "F = \"" << p.F->to_string(vars) << "\"\n";
  o << "\n[point]\nx = " << nums(p.x) << "\ny = " << nums(p.y) << "\n";
  for (const auto& piece : p.solution_map) {
    o << "\n[[solution_map]]\nregion = " << exprs(piece.region, " <= 0") << "\ny = " << exprs(piece.y, "")
      << "\nlambda = " << exprs(piece.lambda, "") << "\n";
  }
  return o.str();
}

bool structurally_equal(const MpecProblem& a, const MpecProblem& b) {
  if (a.name != b.name || a.n != b.n || a.m != b.m || a.p != b.p || a.q != b.q) return false;
  if (a.phi != b.phi || a.g != b.g || a.G != b.G || a.F != b.F || a.x != b.x || a.y != b.y) return false;
  if (a.solution_map.size() != b.solution_map.size()) return false;
  for (std::size_t i = 0; i < a.solution_map.size(); ++i) {
    const auto &s = a.solution_map[i], &t = b.solution_map[i];
    if (!(s.region == t.region) || !(s.y == t.y) || !(s.lambda == t.lambda)) return false;
  }
  return true;
}

// ----------------------------------------------------------------- MPCC

MpccSystem build_mpcc(const MpecProblem& p) {
  p.check();
  MpccSystem s;
  s.n = p.n;
  s.m = p.m;
  s.p = p.p;
  s.q = p.q;
  std::size_t nv = p.n + p.m + p.q;
  std::vector<std::size_t> lift(p.n + p.m);
  for (std::size_t i = 0; i < lift.size(); ++i) lift[i] = i;
  for (std::size_t j = 0; j < p.m; ++j) {
    Poly h = p.phi[j].embed(nv, lift);
    for (std::size_t i = 0; i < p.q; ++i)
      h += p.g[i].differentiate(p.n + j).embed(nv, lift) * Poly::variable(nv, p.n + p.m + i);
    s.h.push_back(std::move(h));
  }
  for (const auto& gi : p.g) s.g.push_back(gi.embed(nv, lift));
  for (const auto& Gi : p.G) s.G.push_back(Gi.embed(nv, lift));
  return s;
}

FeasibilityReport validate_point(const MpecProblem& p) {
  p.check();
  FeasibilityReport r;
  r.g_values = p.g_at(p.y);
  r.G_values = p.G_at();
  r.ystar = p.ystar();
  r.g_feasible = true;
  for (std::size_t i = 0; i < r.g_values.size(); ++i)
    if (sgn(r.g_values[i]) > 0) {
      r.g_feasible = false;
      r.messages.push_back("g" + std::to_string(i + 1) + "(y) = " + r.g_values[i].get_str() + " > 0");
    }
  r.G_feasible = true;
  for (std::size_t i = 0; i < r.G_values.size(); ++i)
    if (sgn(r.G_values[i]) > 0) {
      r.G_feasible = false;
      r.messages.push_back("G" + std::to_string(i + 1) + "(x,y) = " + r.G_values[i].get_str() + " > 0");
    }
  if (!r.g_feasible) {
    r.messages.push_back("multiplier system not attempted: lower-level point infeasible");
    return r;
  }
  LpProblem lp = LpProblem::feasibility(p.q);
  Matrix grad = p.grad_g(p.y);
  lp.eq = grad.transpose();
  lp.eq_rhs = r.ystar;
  for (std::size_t i = 0; i < p.q; ++i) {
    Vec row = scaled(unit(p.q, i), Rational(-1));
    if (sgn(r.g_values[i]) == 0) {
      lp.ineq.append_row(row);
      lp.ineq_rhs.push_back(0);
    } else {
      lp.eq.append_row(unit(p.q, i));
      lp.eq_rhs.push_back(0);
    }
  }
  LpOutcome out = lp_solve(lp);
  r.multiplier_feasible = out.status == LpStatus::Optimal;
  if (!r.multiplier_feasible)
    r.messages.push_back("no lower-level multiplier: -phi(x,y) is not a normal vector of the lower-level set");
  return r;
}

}  // namespace mpeccq
