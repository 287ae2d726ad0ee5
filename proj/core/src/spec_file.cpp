#include "arfinsler/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>

#include "arfinsler/errors.hpp"

namespace arf {
namespace {

enum class Tok { Ident, Int, Sym, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i, ++col;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i, ++col;
      continue;
    }
    const int start = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), line, start});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), line, start});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::string_view("+-*/^()[],=;").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), line, start});
      ++i, ++col;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, start);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Node {
  enum Kind { Num, X, Y, Theta, Neg, Add, Sub, Mul, Div, Pow } kind;
  mpq_class num;
  int index = 0;  // variable index (1-based) or exponent
  std::vector<std::shared_ptr<Node>> kids;
  int line, col;
};
using NodeP = std::shared_ptr<Node>;

struct Value {
  NodeP expr;  // null for lists and words
  std::string word;
  std::vector<Value> items;
  bool is_list = false;
  int line, col;
};

struct Stmt {
  std::string key;
  std::vector<int> mu;
  Value value;
  int line, col;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  std::vector<Stmt> file() {
    std::vector<Stmt> out;
    for (;;) {
      while (is_sep()) ++p_;
      if (cur().kind == Tok::End) break;
      out.push_back(stmt());
      if (!is_sep() && cur().kind != Tok::End) fail("expected end of statement");
    }
    return out;
  }

 private:
  const Token& cur() const { return t_[p_]; }
  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_sep() const { return cur().kind == Tok::Newline || is_sym(";"); }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& k = cur();
    const std::string near = k.kind == Tok::End ? "end of input" : k.kind == Tok::Newline ? "end of line" : "'" + k.text + "'";
    throw ParseError(what + " near " + near, k.line, k.col);
  }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++p_;
  }

  Stmt stmt() {
    if (cur().kind != Tok::Ident) fail("expected a key");
    Stmt st{cur().text, {}, {}, cur().line, cur().col};
    ++p_;
    if (st.key == "mu") {
      expect("[");
      for (;;) {
        if (cur().kind != Tok::Int) fail("expected an index");
        st.mu.push_back(std::stoi(cur().text));
        ++p_;
        if (is_sym("]")) break;
        expect(",");
      }
      ++p_;
    }
    expect("=");
    if (st.key == "family" || st.key == "weyl") {
      if (cur().kind != Tok::Ident) fail("expected a name");
      st.value.word = cur().text;
      st.value.line = cur().line;
      st.value.col = cur().col;
      ++p_;
    } else {
      st.value = value();
    }
    return st;
  }

  Value value() {
    Value v;
    v.line = cur().line;
    v.col = cur().col;
    if (is_sym("[")) {
      ++p_;
      v.is_list = true;
      for (;;) {
        v.items.push_back(value());
        if (is_sym("]")) break;
        expect(",");
      }
      ++p_;
      return v;
    }
    v.expr = expr();
    return v;
  }

  NodeP make(Node::Kind k, const Token& at, std::vector<NodeP> kids = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    n->line = at.line;
    n->col = at.col;
    return n;
  }

  NodeP expr() {
    NodeP lhs = term();
    while (is_sym("+") || is_sym("-")) {
      const Token op = cur();
      ++p_;
      lhs = make(op.text == "+" ? Node::Add : Node::Sub, op, {lhs, term()});
    }
    return lhs;
  }

  NodeP term() {
    NodeP lhs = unary();
    while (is_sym("*") || is_sym("/")) {
      const Token op = cur();
      ++p_;
      lhs = make(op.text == "*" ? Node::Mul : Node::Div, op, {lhs, unary()});
    }
    return lhs;
  }

  NodeP unary() {
    if (is_sym("-") || is_sym("+")) {
      const Token op = cur();
      ++p_;
      NodeP inner = unary();
      return op.text == "-" ? make(Node::Neg, op, {inner}) : inner;
    }
    return power();
  }

  NodeP power() {
    NodeP base = atom();
    if (!is_sym("^")) return base;
    const Token op = cur();
    ++p_;
    const bool paren = is_sym("(");
    if (paren) ++p_;
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      ++p_;
    }
    if (cur().kind != Tok::Int) fail("expected an integer exponent");
    if (cur().text.size() > 4) fail("exponent too large");
    NodeP n = make(Node::Pow, op, {base});
    n->index = std::stoi(cur().text) * (neg ? -1 : 1);
    ++p_;
    if (paren) expect(")");
    return n;
  }

  NodeP atom() {
    const Token k = cur();
    if (k.kind == Tok::Int) {
      ++p_;
      NodeP n = make(Node::Num, k);
      n->num = mpq_class(mpz_class(k.text));
      return n;
    }
    if (k.kind == Tok::Ident) {
      ++p_;
      if (k.text == "theta") return make(Node::Theta, k);
      if (k.text.size() >= 2 && (k.text[0] == 'x' || k.text[0] == 'y') &&
          std::all_of(k.text.begin() + 1, k.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
          k.text.size() <= 4) {
        NodeP n = make(k.text[0] == 'x' ? Node::X : Node::Y, k);
        n->index = std::stoi(k.text.substr(1));
        if (n->index < 1) throw ParseError("variable indices start at 1", k.line, k.col);
        return n;
      }
      throw ParseError("unknown symbol '" + k.text + "'", k.line, k.col);
    }
    if (is_sym("(")) {
      ++p_;
      NodeP e = expr();
      expect(")");
      return e;
    }
    fail("expected an expression");
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
};

int max_var(const NodeP& n) {
  int m = (n->kind == Node::X || n->kind == Node::Y) ? n->index : 0;
  for (const auto& k : n->kids) m = std::max(m, max_var(k));
  return m;
}

int max_var(const Value& v) {
  if (v.expr) return max_var(v.expr);
  int m = 0;
  for (const auto& i : v.items) m = std::max(m, max_var(i));
  return m;
}

template <class T, class Leaf>
T eval_node(const NodeP& n, const Leaf& leaf) {
  try {
    switch (n->kind) {
      case Node::Num:
      case Node::X:
      case Node::Y:
      case Node::Theta:
        return leaf(*n);
      case Node::Neg:
        return -eval_node<T>(n->kids[0], leaf);
      case Node::Add:
        return eval_node<T>(n->kids[0], leaf) + eval_node<T>(n->kids[1], leaf);
      case Node::Sub:
        return eval_node<T>(n->kids[0], leaf) - eval_node<T>(n->kids[1], leaf);
      case Node::Mul:
        return eval_node<T>(n->kids[0], leaf) * eval_node<T>(n->kids[1], leaf);
      case Node::Div:
        return eval_node<T>(n->kids[0], leaf) / eval_node<T>(n->kids[1], leaf);
      case Node::Pow:
        return eval_node<T>(n->kids[0], leaf).pow(n->index);
    }
  } catch (const DivisionByZero&) {
    throw ParseError("division by zero", n->line, n->col);
  } catch (const NotInvertible&) {
    throw ParseError("division by a zero divisor", n->line, n->col);
  } catch (const ExponentOverflow&) {
    throw ParseError("exponent out of range", n->line, n->col);
  }
  throw ParseError("bad expression", n->line, n->col);
}

RatFn to_ratfn(const Value& v, int n) {
  if (!v.expr) throw ArityError("expected an expression at line " + std::to_string(v.line) + ", got a list");
  return eval_node<RatFn>(v.expr, [n](const Node& k) -> RatFn {
    switch (k.kind) {
      case Node::Num:
        return RatFn(n, k.num);
      case Node::X:
      case Node::Y:
        if (k.index > n)
          throw ParseError("variable index " + std::to_string(k.index) + " exceeds dimension " + std::to_string(n),
                           k.line, k.col);
        return k.kind == Node::X ? RatFn::x(n, k.index) : RatFn::y(n, k.index);
      default:
        throw ParseError("theta is only allowed in F2", k.line, k.col);
    }
  });
}

FieldElem to_field(const Value& v, const Kernel& K) {
  if (!v.expr) throw ArityError("F2 must be an expression");
  const int n = K->n;
  return eval_node<FieldElem>(v.expr, [&](const Node& k) -> FieldElem {
    if (k.kind == Node::Theta) return FieldElem::theta_pow(K, 1);
    Value leaf;
    leaf.expr = std::make_shared<Node>(k);
    return FieldElem(K, to_ratfn(leaf, n));
  });
}

mpq_class to_rational(const Value& v, int n) {
  RatFn r = to_ratfn(v, n);
  if (!r.is_constant()) throw ParseError("expected a constant", v.line, v.col);
  return r.constant_value();
}

int to_int(const Value& v, int n) {
  mpq_class q = to_rational(v, n);
  if (q.get_den() != 1 || !q.get_num().fits_sint_p()) throw ParseError("expected an integer", v.line, v.col);
  return static_cast<int>(q.get_num().get_si());
}

const std::vector<Value>& as_list(const Value& v, const std::string& key) {
  if (!v.is_list) throw ArityError("'" + key + "' must be a list (line " + std::to_string(v.line) + ")");
  return v.items;
}

const std::set<std::string> kCommon = {"n", "family", "sigma", "points", "weyl", "precision"};

const std::map<std::string, std::set<std::string>>& family_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"riemannian", {"alpha"}},
      {"randers", {"alpha", "b"}},
      {"kropina", {"alpha", "b"}},
      {"gen_kropina", {"alpha", "b", "k"}},
      {"poly_ab", {"alpha", "b", "phi_a", "phi_b", "phi_k", "phi_m"}},
      {"mth_root", {"m", "A", "mu"}},
      {"extended_mth_root", {"m", "A", "mu"}},
      {"kropina_change", {"m", "A", "mu", "b", "k"}},
      {"raw", {"F2", "m", "A"}},
  };
  return keys;
}

void require(const MetricSpec& s, bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("family " + s.family + " requires " + what);
}

std::string join_row(const std::vector<RatFn>& row) {
  std::string out = "[";
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? ", " : "") + row[i].str();
  return out + "]";
}

}  // namespace

const std::vector<std::string>& spec_families() {
  static const std::vector<std::string> names = {"riemannian", "randers",           "kropina",
                                                 "gen_kropina", "poly_ab",          "mth_root",
                                                 "extended_mth_root", "kropina_change", "raw"};
  return names;
}

bool operator==(const MetricSpec& a, const MetricSpec& b) {
  if (a.n != b.n || a.family != b.family || a.alpha != b.alpha || a.b != b.b || a.k != b.k || a.m != b.m ||
      a.A != b.A || a.mu != b.mu || a.phi_a != b.phi_a || a.phi_b != b.phi_b || a.phi_k != b.phi_k ||
      a.phi_m != b.phi_m || a.sigma != b.sigma || a.points != b.points || a.weyl != b.weyl ||
      a.precision != b.precision || a.F2.has_value() != b.F2.has_value())
    return false;
  if (!a.F2) return true;
  return a.F2->kernel()->same_as(*b.F2->kernel()) && a.F2->coeffs() == b.F2->coeffs();
}

MetricSpec parse_metric_file(std::string_view text) {
  const std::vector<Stmt> stmts = Parser(lex(text)).file();

  std::map<std::string, const Stmt*> by_key;
  std::map<std::vector<int>, const Stmt*> mu_stmts;
  for (const auto& st : stmts) {
    const bool known = kCommon.count(st.key) || std::any_of(family_keys().begin(), family_keys().end(), [&](const auto& kv) {
                         return kv.second.count(st.key) > 0;
                       });
    if (!known) throw ParseError("unknown key '" + st.key + "'", st.line, st.col);
    if (st.key == "mu") {
      std::vector<int> idx = st.mu;
      std::sort(idx.begin(), idx.end());
      if (!mu_stmts.emplace(idx, &st).second) throw ParseError("duplicate coefficient mu", st.line, st.col);
      continue;
    }
    if (!by_key.emplace(st.key, &st).second) throw ParseError("duplicate key '" + st.key + "'", st.line, st.col);
  }

  MetricSpec s;
  auto fam = by_key.find("family");
  if (fam == by_key.end()) throw InvalidArgument("missing key 'family'");
  s.family = fam->second->value.word;
  auto fk = family_keys().find(s.family);
  if (fk == family_keys().end())
    throw ParseError("unknown family '" + s.family + "'", fam->second->value.line, fam->second->value.col);
  for (const auto& st : stmts)
    if (!kCommon.count(st.key) && !fk->second.count(st.key))
      throw ParseError("key '" + st.key + "' does not apply to family " + s.family, st.line, st.col);

  // Dimension: explicit, else the largest index in use.
  int inferred = 0;
  for (const auto& st : stmts) {
    if (st.key == "family" || st.key == "weyl") continue;
    if (st.key == "points") continue;
    inferred = std::max(inferred, max_var(st.value));
    if (st.key == "alpha" || st.key == "b") inferred = std::max(inferred, static_cast<int>(st.value.items.size()));
    for (int i : st.mu) inferred = std::max(inferred, i);
  }
  if (auto it = by_key.find("n"); it != by_key.end()) {
    s.n = to_int(it->second->value, 1);
    if (s.n < 1) throw ParseError("dimension must be positive", it->second->value.line, it->second->value.col);
    if (inferred > s.n) throw ParseError("expression uses an index beyond n", it->second->line, it->second->col);
  } else {
    s.n = inferred;
  }
  if (s.n < 1) throw InvalidArgument("cannot determine the dimension; add 'n = ...'");
  if (s.n > 4) throw InvalidArgument("dimension above 4 is not supported");
  const int n = s.n;

  auto get = [&](const char* key) -> const Value* {
    auto it = by_key.find(key);
    return it == by_key.end() ? nullptr : &it->second->value;
  };

  if (const Value* v = get("alpha")) {
    const auto& rows = as_list(*v, "alpha");
    if (static_cast<int>(rows.size()) != n) throw ArityError("alpha must have n rows");
    std::vector<std::vector<RatFn>> a;
    for (const auto& row : rows) {
      const auto& entries = as_list(row, "alpha row");
      if (static_cast<int>(entries.size()) != n) throw ArityError("alpha must be n x n");
      std::vector<RatFn> r;
      for (const auto& e : entries) r.push_back(to_ratfn(e, n));
      a.push_back(std::move(r));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (a[i][j] != a[j][i]) throw ArityError("alpha must be symmetric");
    s.alpha = std::move(a);
  }
  if (const Value* v = get("b")) {
    const auto& entries = as_list(*v, "b");
    if (static_cast<int>(entries.size()) != n) throw ArityError("b must have n entries");
    std::vector<RatFn> b;
    for (const auto& e : entries) b.push_back(to_ratfn(e, n));
    s.b = std::move(b);
  }
  if (const Value* v = get("k")) s.k = to_int(*v, n);
  if (const Value* v = get("m")) s.m = to_int(*v, n);
  if (const Value* v = get("A")) s.A = to_ratfn(*v, n);
  for (const auto& [idx, st] : mu_stmts) {
    for (int i : idx)
      if (i < 1 || i > n) throw ParseError("mu index out of range", st->line, st->col);
    s.mu.emplace(idx, to_ratfn(st->value, n));
  }
  if (const Value* v = get("phi_a")) s.phi_a = to_rational(*v, n);
  if (const Value* v = get("phi_b")) s.phi_b = to_rational(*v, n);
  if (const Value* v = get("phi_k")) s.phi_k = to_int(*v, n);
  if (const Value* v = get("phi_m")) s.phi_m = to_int(*v, n);
  if (const Value* v = get("sigma")) s.sigma = to_ratfn(*v, n);
  if (const Value* v = get("points")) {
    for (const auto& p : as_list(*v, "points")) {
      const auto& coords = as_list(p, "point");
      if (static_cast<int>(coords.size()) != 2 * n) throw ArityError("each point needs 2n coordinates");
      std::vector<mpq_class> q;
      for (const auto& c : coords) q.push_back(to_rational(c, n));
      s.points.push_back(std::move(q));
    }
  }
  if (auto it = by_key.find("weyl"); it != by_key.end()) {
    const Value& v = it->second->value;
    if (v.word == "printed")
      s.weyl = WeylVariant::Printed;
    else if (v.word == "standard")
      s.weyl = WeylVariant::Standard;
    else
      throw ParseError("weyl must be 'printed' or 'standard'", v.line, v.col);
  }
  if (const Value* v = get("precision")) {
    const int p = to_int(*v, n);
    if (p < 20 || p > 10000) throw ParseError("precision must be between 20 and 10000 digits", v->line, v->col);
    s.precision = static_cast<unsigned>(p);
  }

  // Family requirements.
  const std::string& f = s.family;
  if (f == "riemannian" || f == "randers" || f == "kropina" || f == "gen_kropina" || f == "poly_ab")
    require(s, s.alpha.has_value(), "alpha");
  if (f == "randers" || f == "kropina" || f == "gen_kropina" || f == "poly_ab" || f == "kropina_change")
    require(s, s.b.has_value(), "b");
  if (f == "gen_kropina" || f == "kropina_change") require(s, s.k.has_value(), "k");
  if (f == "poly_ab") require(s, s.phi_a && s.phi_b && s.phi_k && s.phi_m, "phi_a, phi_b, phi_k and phi_m");
  if (f == "mth_root" || f == "extended_mth_root" || f == "kropina_change") {
    require(s, s.m.has_value(), "m");
    require(s, s.A.has_value() != !s.mu.empty(), "exactly one of A and mu[...]");
    for (const auto& [idx, st] : mu_stmts)
      if (static_cast<int>(idx.size()) != *s.m) throw ArityError("mu needs exactly m indices");
  }
  if (f == "raw") {
    require(s, by_key.count("F2") > 0, "F2");
    require(s, s.m.has_value() == s.A.has_value(), "m and A together (or neither)");
    const Kernel K = s.m ? make_kernel(n, *s.m, *s.A) : trivial_kernel(n);
    s.F2 = to_field(by_key.at("F2")->value, K);
  }
  return s;
}

std::string print_metric_file(const MetricSpec& s) {
  std::ostringstream os;
  os << "n = " << s.n << "\n";
  os << "family = " << s.family << "\n";
  if (s.alpha) {
    os << "alpha = [";
    for (std::size_t i = 0; i < s.alpha->size(); ++i) os << (i ? ", " : "") << join_row((*s.alpha)[i]);
    os << "]\n";
  }
  if (s.b) os << "b = " << join_row(*s.b) << "\n";
  if (s.k) os << "k = " << *s.k << "\n";
  if (s.m) os << "m = " << *s.m << "\n";
  if (s.A) os << "A = " << s.A->str() << "\n";
  for (const auto& [idx, c] : s.mu) {
    os << "mu[";
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << "] = " << c.str() << "\n";
  }
  if (s.phi_a) os << "phi_a = " << s.phi_a->get_str() << "\n";
  if (s.phi_b) os << "phi_b = " << s.phi_b->get_str() << "\n";
  if (s.phi_k) os << "phi_k = " << *s.phi_k << "\n";
  if (s.phi_m) os << "phi_m = " << *s.phi_m << "\n";
  if (s.sigma) os << "sigma = " << s.sigma->str() << "\n";
  if (s.F2) {
    os << "F2 = ";
    bool first = true;
    for (int d = 0; d < s.F2->m(); ++d) {
      if (s.F2->coeff(d).is_zero()) continue;
      os << (first ? "" : " + ") << "(" << s.F2->coeff(d).str() << ")";
      if (d == 1) os << "*theta";
      if (d > 1) os << "*theta^" << d;
      first = false;
    }
    if (first) os << "0";
    os << "\n";
  }
  if (!s.points.empty()) {
    os << "points = [";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      os << (i ? ", " : "") << "[";
      for (std::size_t j = 0; j < s.points[i].size(); ++j) os << (j ? ", " : "") << s.points[i][j].get_str();
      os << "]";
    }
    os << "]\n";
  }
  if (s.weyl) os << "weyl = " << (*s.weyl == WeylVariant::Printed ? "printed" : "standard") << "\n";
  if (s.precision) os << "precision = " << *s.precision << "\n";
  return os.str();
}

MetricInstance build_instance(const MetricSpec& s) {
  const std::string& f = s.family;
  RiemannData a;
  if (s.alpha) a.alpha = *s.alpha;
  OneFormData b;
  if (s.b) b.b = *s.b;
  if (f == "riemannian") return make_riemannian(a);
  if (f == "randers") return make_randers(a, b, s.points);
  if (f == "kropina") return make_gen_kropina(a, b, 1);
  if (f == "gen_kropina") return make_gen_kropina(a, b, *s.k);
  if (f == "poly_ab") return make_poly_ab(a, b, *s.phi_a, *s.phi_b, *s.phi_k, *s.phi_m);
  if (f == "raw") return make_raw(s.F2->kernel(), *s.F2);
  RootData r;
  r.m = *s.m;
  r.A = s.A;
  r.coeffs = s.mu;
  bool extended = f == "extended_mth_root";
  if (f == "kropina_change") {
    extended = s.A && !s.A->is_polynomial();
    for (const auto& kv : s.mu)
      if (!kv.second.is_y_free()) extended = true;
    const MetricInstance base = extended ? make_extended_mth_root(r, s.n) : make_mth_root(r, s.n);
    return make_kropina_change(base, b, *s.k);
  }
  return extended ? make_extended_mth_root(r, s.n) : make_mth_root(r, s.n);
}

}  // namespace arf
