#include "modfus/mdf.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>

#include "modfus/errors.hpp"

namespace modfus {

// ---- expressions ------------------------------------------------------------

bool Expr::operator==(const Expr& o) const {
  if (kind != o.kind) return false;
  auto same = [](const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
  };
  switch (kind) {
    case Kind::Rat:
      return num == o.num && den == o.den && has_den == o.has_den;
    case Kind::Root:
    case Kind::Sqrt:
      return arg == o.arg;
    case Kind::Pow:
      return exponent == o.exponent && same(lhs, o.lhs);
    case Kind::Neg:
      return same(lhs, o.lhs);
    default:
      return same(lhs, o.lhs) && same(rhs, o.rhs);
  }
}

namespace {

using K = Expr::Kind;

class ExprParser {
 public:
  ExprParser(std::string_view s, std::size_t base) : s_(s), base_(base) {}

  ExprPtr parse() {
    auto e = expr();
    ws();
    if (p_ != s_.size()) fail("unexpected character '" + std::string(1, s_[p_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t base_;
  std::size_t p_ = 0;

  [[noreturn]] void fail(const std::string& m) const { throw SyntaxError(m, base_ + p_); }

  void ws() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool peek(char c) {
    ws();
    return p_ < s_.size() && s_[p_] == c;
  }
  bool peek_digit() {
    ws();
    return p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]));
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++p_;
  }

  mpz_class uint_lit() {
    if (!peek_digit()) fail("expected integer");
    std::size_t b = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    return mpz_class(std::string(s_.substr(b, p_ - b)));
  }

  unsigned long small_uint(const char* what) {
    std::size_t at = p_;
    mpz_class v = uint_lit();
    if (!v.fits_ulong_p() || v > 1000000 || v == 0) {
      p_ = at;
      fail(std::string(what) + " argument must be in 1..1000000");
    }
    return v.get_ui();
  }

  ExprPtr node(K k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
  }

  ExprPtr expr() {
    auto e = term();
    for (;;) {
      if (peek('+')) {
        ++p_;
        e = make_bin(K::Add, e, term());
      } else if (peek('-')) {
        ++p_;
        e = make_bin(K::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    auto e = factor();
    for (;;) {
      if (peek('*')) {
        ++p_;
        e = make_bin(K::Mul, e, factor());
      } else if (peek('/')) {
        ++p_;
        e = make_bin(K::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    bool neg = false;
    if (peek('-')) {
      ++p_;
      neg = true;
    }
    auto a = atom();
    if (peek('^')) {
      ++p_;
      bool eneg = false;
      if (peek('-')) {
        ++p_;
        eneg = true;
      }
      std::size_t at = p_;
      mpz_class v = uint_lit();
      if (!v.fits_slong_p()) {
        p_ = at;
        fail("exponent too large");
      }
      auto pw = std::make_shared<Expr>();
      pw->kind = K::Pow;
      pw->exponent = eneg ? -v.get_si() : v.get_si();
      pw->lhs = a;
      a = pw;
    }
    if (neg) {
      auto n = std::make_shared<Expr>();
      n->kind = K::Neg;
      n->lhs = a;
      a = n;
    }
    return a;
  }

  ExprPtr atom() {
    ws();
    if (p_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[p_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto e = std::make_shared<Expr>();
      e->kind = K::Rat;
      e->num = uint_lit();
      e->den = 1;
      std::size_t save = p_;
      if (peek('/')) {
        ++p_;
        if (peek_digit()) {
          e->den = uint_lit();
          e->has_den = true;
        } else {
          p_ = save;
        }
      }
      return e;
    }
    if (c == '(') {
      ++p_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (s_.substr(p_, 4) == "sqrt") {
      p_ += 4;
      expect('(');
      auto e = std::make_shared<Expr>();
      e->kind = K::Sqrt;
      e->arg = small_uint("sqrt");
      expect(')');
      return e;
    }
    if (c == 'E') {
      ++p_;
      expect('(');
      auto e = std::make_shared<Expr>();
      e->kind = K::Root;
      e->arg = small_uint("E");
      expect(')');
      return e;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

bool is_atom(const Expr& e) { return e.kind == K::Rat || e.kind == K::Root || e.kind == K::Sqrt; }

std::string print_at(const Expr& e, int ctx);

std::string paren(const Expr& e) { return "(" + print_at(e, 0) + ")"; }

// ctx: 0 expr, 1 term, 2 factor, 3 atom
std::string print_at(const Expr& e, int ctx) {
  switch (e.kind) {
    case K::Rat: {
      std::string s = e.num.get_str();
      if (e.has_den) s += "/" + e.den.get_str();
      return s;
    }
    case K::Root:
      return "E(" + std::to_string(e.arg) + ")";
    case K::Sqrt:
      return "sqrt(" + std::to_string(e.arg) + ")";
    case K::Pow: {
      std::string s = (is_atom(*e.lhs) ? print_at(*e.lhs, 3) : paren(*e.lhs)) + "^" +
                      std::to_string(e.exponent);
      return ctx >= 3 ? "(" + s + ")" : s;
    }
    case K::Neg: {
      const Expr& x = *e.lhs;
      std::string s = "-" + ((is_atom(x) || x.kind == K::Pow) ? print_at(x, 2) : paren(x));
      return ctx >= 3 ? "(" + s + ")" : s;
    }
    case K::Add:
    case K::Sub: {
      const Expr& r = *e.rhs;
      std::string rs = (r.kind == K::Add || r.kind == K::Sub) ? paren(r) : print_at(r, 1);
      std::string s = print_at(*e.lhs, 0) + (e.kind == K::Add ? "+" : "-") + rs;
      return ctx >= 1 ? "(" + s + ")" : s;
    }
    case K::Mul:
    case K::Div: {
      const Expr& l = *e.lhs;
      const Expr& r = *e.rhs;
      std::string ls = (l.kind == K::Add || l.kind == K::Sub) ? paren(l) : print_at(l, 1);
      bool wrap = r.kind == K::Add || r.kind == K::Sub || r.kind == K::Mul || r.kind == K::Div;
      std::string rs = wrap ? paren(r) : print_at(r, 2);
      if (e.kind == K::Div && !wrap && std::isdigit(static_cast<unsigned char>(rs[0])))
        rs = "(" + rs + ")";
      std::string s = ls + (e.kind == K::Mul ? "*" : "/") + rs;
      return ctx >= 2 ? "(" + s + ")" : s;
    }
  }
  return {};
}

}  // namespace

ExprPtr make_bin(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr make_rat(const Rational& q) {
  auto e = std::make_shared<Expr>();
  e->kind = K::Rat;
  e->num = abs(q.get_num());
  e->den = q.get_den();
  e->has_den = q.get_den() != 1;
  if (sgn(q) >= 0) return e;
  auto n = std::make_shared<Expr>();
  n->kind = K::Neg;
  n->lhs = e;
  return n;
}

ExprPtr parse_expr(std::string_view text) { return ExprParser(text, 0).parse(); }

std::string print_expr(const Expr& e) { return print_at(e, 0); }

Cyclotomic eval_expr(const Expr& e) {
  switch (e.kind) {
    case K::Rat:
      if (e.den == 0) throw ZeroDivision("literal " + print_expr(e));
      return Cyclotomic(Rational(e.num, e.den));
    case K::Root:
      return root_of_unity(static_cast<unsigned>(e.arg), 1);
    case K::Sqrt:
      return sqrt_int(e.arg);
    case K::Neg:
      return -eval_expr(*e.lhs);
    case K::Add:
      return eval_expr(*e.lhs) + eval_expr(*e.rhs);
    case K::Sub:
      return eval_expr(*e.lhs) - eval_expr(*e.rhs);
    case K::Mul:
      return eval_expr(*e.lhs) * eval_expr(*e.rhs);
    case K::Div: {
      Cyclotomic d = eval_expr(*e.rhs);
      if (d.is_zero()) throw ZeroDivision(print_expr(*e.rhs) + " evaluates to 0");
      return eval_expr(*e.lhs) / d;
    }
    case K::Pow: {
      Cyclotomic b = eval_expr(*e.lhs);
      if (b.is_zero() && e.exponent < 0) throw ZeroDivision(print_expr(e));
      return b.pow(e.exponent);
    }
  }
  return {};
}

Cyclotomic eval_expr(std::string_view text) { return eval_expr(*parse_expr(text)); }

// ---- records ----------------------------------------------------------------

namespace {

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

}  // namespace

bool LabelRec::operator==(const LabelRec& o) const {
  return index == o.index && name == o.name && same_expr(qdim, o.qdim) && dual == o.dual &&
         weight == o.weight && note == o.note;
}

bool SRec::operator==(const SRec& o) const {
  return row == o.row && col == o.col && same_expr(value, o.value) && note == o.note;
}

const Section* DatumFile::find(std::string_view kind) const {
  for (const auto& s : sections)
    if (s.kind == kind) return &s;
  return nullptr;
}

Section* DatumFile::find(std::string_view kind) {
  for (auto& s : sections)
    if (s.kind == kind) return &s;
  return nullptr;
}

std::vector<const Section*> DatumFile::branchings() const {
  std::vector<const Section*> r;
  for (const auto& s : sections)
    if (s.kind == "branching") r.push_back(&s);
  return r;
}

std::optional<std::string> DatumFile::header(std::string_view key) const {
  const Section* h = find("header");
  if (!h) return std::nullopt;
  for (const auto& l : h->lines)
    if (auto* r = std::get_if<HeaderRec>(&l); r && r->key == key) return r->value;
  return std::nullopt;
}

int DatumFile::modules() const {
  auto m = header("modules");
  return m ? std::stoi(*m) : -1;
}

std::string print_terms(const Terms& t) {
  std::string s;
  for (const auto& [k, m] : t) {
    if (!s.empty()) s += " + ";
    if (m != 1) s += std::to_string(m) + "*";
    s += std::to_string(k);
  }
  return s;
}

std::string print_ranges(const std::vector<IndexRange>& r) {
  std::string s;
  for (const auto& x : r) {
    if (!s.empty()) s += ",";
    s += std::to_string(x.lo);
    if (x.hi != x.lo) s += "-" + std::to_string(x.hi);
  }
  return s;
}

// ---- file parser ----------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class FileParser {
 public:
  explicit FileParser(std::string_view text) : text_(text) {}

  DatumFile run() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      line(text_.substr(pos, nl - pos), pos);
      pos = nl + 1;
    }
    check();
    return std::move(d_);
  }

 private:
  std::string_view text_;
  DatumFile d_;
  Section* cur_ = nullptr;
  std::vector<std::size_t> section_offsets_;
  // record offsets, per section, for index checks
  std::vector<std::vector<std::size_t>> line_offsets_;

  [[noreturn]] static void fail(const std::string& m, std::size_t off) { throw SyntaxError(m, off); }

  void line(std::string_view raw, std::size_t off) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::string note;
    std::size_t hash = raw.find('#');
    std::string_view body = raw;
    if (hash != std::string_view::npos) {
      std::string_view c = raw.substr(hash + 1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      note = std::string(trim(c));
      body = raw.substr(0, hash);
    }
    std::size_t line_off = off;
    std::size_t lead = 0;
    while (lead < body.size() && std::isspace(static_cast<unsigned char>(body[lead]))) ++lead;
    std::string_view t = trim(body);
    if (t.empty()) {
      if (hash == std::string_view::npos) return;
      if (cur_) {
        cur_->lines.push_back(Comment{note});
        line_offsets_.back().push_back(off);
      } else {
        d_.preamble.push_back(Comment{note});
      }
      return;
    }
    off += lead;
    if (t.front() == '[') {
      if (!note.empty()) fail("comment not allowed on a section line", line_off + hash);
      section(t, off);
      return;
    }
    if (!cur_) fail("record outside of any section", off);
    const std::string& k = cur_->kind;
    if (k == "header") {
      cur_->lines.push_back(header_rec(t, off, note));
    } else if (k == "labels") {
      cur_->lines.push_back(label_rec(t, off, note));
    } else if (k == "S") {
      cur_->lines.push_back(s_rec(t, off, note));
    } else if (k == "fusion") {
      cur_->lines.push_back(fusion_rec(t, off, note));
    } else {
      cur_->lines.push_back(branch_rec(t, off, note));
    }
    line_offsets_.back().push_back(off);
  }

  void section(std::string_view t, std::size_t off) {
    if (t.back() != ']') fail("unterminated section header", off);
    std::string_view in = trim(t.substr(1, t.size() - 2));
    Section s;
    std::size_t sp = in.find_first_of(" \t");
    s.kind = std::string(in.substr(0, sp));
    static const std::set<std::string> kinds = {"header", "labels", "S", "fusion", "branching"};
    if (!kinds.count(s.kind)) fail("unknown section '" + s.kind + "'", off);
    if (s.kind == "branching") {
      std::string_view rest = sp == std::string_view::npos ? "" : trim(in.substr(sp));
      constexpr std::string_view pre = "parent=\"";
      if (rest.substr(0, pre.size()) != pre || rest.size() < pre.size() + 1 || rest.back() != '"')
        fail("branching section needs parent=\"...\"", off);
      s.parent = std::string(rest.substr(pre.size(), rest.size() - pre.size() - 1));
      if (parent_k(s.parent) < 1) fail("unsupported parent '" + s.parent + "'", off);
    } else {
      if (sp != std::string_view::npos) fail("unexpected attributes on section", off);
      if (d_.find(s.kind)) throw DuplicateEntry("section [" + s.kind + "] declared twice");
    }
    d_.sections.push_back(std::move(s));
    cur_ = &d_.sections.back();
    section_offsets_.push_back(off);
    line_offsets_.emplace_back();
  }

  static int parent_k(const std::string& p) {
    constexpr std::string_view pre = "lattice:";
    if (p.compare(0, pre.size(), pre) != 0) return -1;
    int k = 0;
    auto s = std::string_view(p).substr(pre.size());
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc() || ptr != s.data() + s.size()) return -1;
    return k;
  }

  // cursor helpers over one record
  struct Cursor {
    std::string_view s;
    std::size_t base;
    std::size_t p = 0;
    void ws() {
      while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    }
    bool done() {
      ws();
      return p >= s.size();
    }
    [[noreturn]] void fail(const std::string& m) const { throw SyntaxError(m, base + p); }
    long integer(bool allow_sign = false) {
      ws();
      std::size_t b = p;
      if (allow_sign && p < s.size() && s[p] == '-') ++p;
      std::size_t d = p;
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
      if (p == d) {
        p = b;
        fail("expected integer");
      }
      long v = 0;
      auto [ptr, ec] = std::from_chars(s.data() + b, s.data() + p, v);
      if (ec != std::errc()) {
        p = b;
        fail("integer out of range");
      }
      (void)ptr;
      return v;
    }
    bool eat(char c) {
      ws();
      if (p < s.size() && s[p] == c) {
        ++p;
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool word(std::string_view w) {
      ws();
      if (s.substr(p, w.size()) != w) return false;
      std::size_t e = p + w.size();
      if (e < s.size() && !std::isspace(static_cast<unsigned char>(s[e]))) return false;
      p = e;
      return true;
    }
    std::string_view token() {
      ws();
      std::size_t b = p;
      while (p < s.size() && !std::isspace(static_cast<unsigned char>(s[p]))) ++p;
      if (b == p) fail("expected token");
      return s.substr(b, p - b);
    }
    ExprPtr expr_rest() {
      ws();
      std::size_t b = p;
      p = s.size();
      return ExprParser(s.substr(b), base + b).parse();
    }
  };

  HeaderRec header_rec(std::string_view t, std::size_t off, const std::string& note) {
    std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) fail("expected key = value", off);
    HeaderRec r{std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))), note};
    static const std::set<std::string> keys = {"name", "modules", "vacuum", "scale"};
    if (!keys.count(r.key)) fail("unknown header key '" + r.key + "'", off);
    for (const auto& l : cur_->lines)
      if (auto* h = std::get_if<HeaderRec>(&l); h && h->key == r.key)
        throw DuplicateEntry("header key '" + r.key + "' declared twice");
    std::size_t voff = off + eq + 1 + (t.substr(eq + 1).size() - trim(t.substr(eq + 1)).size());
    if (r.key == "modules" || r.key == "vacuum") {
      Cursor c{r.value, voff};
      long v = c.integer();
      if (!c.done()) c.fail("trailing characters");
      if (r.key == "modules" && v < 1) c.fail("modules must be positive");
      (void)v;
    } else if (r.key == "scale") {
      ExprParser(r.value, voff).parse();
    }
    return r;
  }

  LabelRec label_rec(std::string_view t, std::size_t off, const std::string& note) {
    Cursor c{t, off};
    LabelRec r;
    r.note = note;
    r.index = static_cast<int>(c.integer());
    r.name = std::string(c.token());
    while (!c.done()) {
      std::size_t at = c.p;
      std::string_view tok = c.token();
      std::size_t eq = tok.find('=');
      if (eq == std::string_view::npos) {
        c.p = at;
        c.fail("expected key=value");
      }
      std::string_view key = tok.substr(0, eq), val = tok.substr(eq + 1);
      std::size_t voff = off + at + eq + 1;
      if (key == "qdim") {
        if (r.qdim) throw DuplicateEntry("qdim given twice for label " + std::to_string(r.index));
        r.qdim = ExprParser(val, voff).parse();
      } else if (key == "dual") {
        if (r.dual) throw DuplicateEntry("dual given twice for label " + std::to_string(r.index));
        Cursor v{val, voff};
        r.dual = static_cast<int>(v.integer());
        if (!v.done()) v.fail("trailing characters");
      } else if (key == "weight") {
        if (r.weight) throw DuplicateEntry("weight given twice for label " + std::to_string(r.index));
        Cursor v{val, voff};
        long n = v.integer(true);
        long d = 1;
        if (v.eat('/')) d = v.integer();
        if (!v.done()) v.fail("trailing characters");
        if (d == 0) v.fail("zero denominator");
        r.weight = Rational(n, d);
        r.weight->canonicalize();
      } else {
        c.p = at;
        c.fail("unknown label key '" + std::string(key) + "'");
      }
    }
    return r;
  }

  SRec s_rec(std::string_view t, std::size_t off, const std::string& note) {
    Cursor c{t, off};
    SRec r;
    r.note = note;
    r.row = static_cast<int>(c.integer());
    r.col = static_cast<int>(c.integer());
    c.expect('=');
    c.ws();
    if (c.s.substr(c.p) == "?") {
      c.p = c.s.size();
    } else {
      r.value = c.expr_rest();
    }
    return r;
  }

  static Terms terms(Cursor& c) {
    Terms out;
    for (;;) {
      long m = 1;
      long k = c.integer();
      if (c.eat('*')) {
        m = k;
        k = c.integer();
        if (m < 1) c.fail("multiplicity must be positive");
      }
      out.emplace_back(static_cast<int>(k), m);
      if (!c.eat('+')) break;
    }
    return out;
  }

  FusionRec fusion_rec(std::string_view t, std::size_t off, const std::string& note) {
    Cursor c{t, off};
    FusionRec r;
    r.note = note;
    r.soft = c.word("soft");
    r.i = static_cast<int>(c.integer());
    if (!c.word("x")) c.fail("expected 'x'");
    r.j = static_cast<int>(c.integer());
    c.expect('=');
    r.rhs = terms(c);
    if (c.word("within")) {
      do {
        IndexRange x;
        x.lo = x.hi = static_cast<int>(c.integer());
        if (c.eat('-')) x.hi = static_cast<int>(c.integer());
        if (x.hi < x.lo) c.fail("empty range");
        r.within.push_back(x);
      } while (c.eat(','));
    }
    if (!c.done()) c.fail("trailing characters");
    return r;
  }

  BranchRec branch_rec(std::string_view t, std::size_t off, const std::string& note) {
    Cursor c{t, off};
    BranchRec r;
    r.note = note;
    r.parent_index = static_cast<int>(c.integer());
    c.expect('=');
    r.rhs = terms(c);
    if (!c.done()) c.fail("trailing characters");
    return r;
  }

  void check() {
    int n = -1;
    if (auto m = d_.header("modules")) n = std::stoi(*m);
    auto in = [&](long v) { return v >= 0 && (n < 0 || v < n); };
    auto oob = [&](const std::string& what, long v) {
      throw IndexOutOfRange(what + " " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
    };
    for (std::size_t si = 0; si < d_.sections.size(); ++si) {
      const Section& s = d_.sections[si];
      if ((s.kind == "labels" || s.kind == "S") && n < 0)
        fail("section [" + s.kind + "] requires 'modules' in [header]", section_offsets_[si]);
      std::set<std::pair<int, int>> seen;
      std::set<int> labels;
      int k2 = s.kind == "branching" ? 2 * parent_k(s.parent) : 0;
      for (const auto& l : s.lines) {
        if (auto* r = std::get_if<LabelRec>(&l)) {
          if (!in(r->index)) oob("label index", r->index);
          if (r->dual && !in(*r->dual)) oob("dual index", *r->dual);
          if (!labels.insert(r->index).second)
            throw DuplicateEntry("label " + std::to_string(r->index) + " declared twice");
        } else if (auto* r = std::get_if<SRec>(&l)) {
          if (!in(r->row)) oob("S row", r->row);
          if (!in(r->col)) oob("S column", r->col);
          if (!seen.insert({r->row, r->col}).second)
            throw DuplicateEntry("S entry (" + std::to_string(r->row) + "," + std::to_string(r->col) +
                                 ") declared twice");
        } else if (auto* r = std::get_if<FusionRec>(&l)) {
          if (!in(r->i)) oob("fusion index", r->i);
          if (!in(r->j)) oob("fusion index", r->j);
          for (const auto& [k, m] : r->rhs)
            if (!in(k)) oob("fusion index", k);
          for (const auto& x : r->within)
            if (!in(x.lo) || !in(x.hi)) oob("range bound", in(x.lo) ? x.hi : x.lo);
        } else if (auto* r = std::get_if<BranchRec>(&l)) {
          if (r->parent_index < 0 || r->parent_index >= k2)
            throw IndexOutOfRange("parent index " + std::to_string(r->parent_index) + " outside 0.." +
                                  std::to_string(k2 - 1) + " of " + s.parent);
          for (const auto& [k, m] : r->rhs)
            if (!in(k)) oob("branching index", k);
          if (!seen.insert({r->parent_index, 0}).second)
            throw DuplicateEntry("parent index " + std::to_string(r->parent_index) + " of " + s.parent +
                                 " declared twice");
        }
      }
      if (s.kind == "labels") {
        for (int i = 0; i < n; ++i)
          if (!labels.count(i)) fail("label " + std::to_string(i) + " not declared", section_offsets_[si]);
      }
    }
  }
};

void put_note(std::string& out, const std::string& note) {
  if (!note.empty()) out += "  # " + note;
  out += "\n";
}

}  // namespace

DatumFile parse_file(std::string_view text) { return FileParser(text).run(); }

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string serialize(const DatumFile& d) {
  std::string out;
  for (const auto& c : d.preamble) out += c.text.empty() ? "#\n" : "# " + c.text + "\n";
  for (const auto& s : d.sections) {
    if (!out.empty()) out += "\n";
    out += "[" + s.kind;
    if (s.kind == "branching") out += " parent=\"" + s.parent + "\"";
    out += "]\n";
    for (const auto& l : s.lines) {
      if (auto* c = std::get_if<Comment>(&l)) {
        out += c->text.empty() ? "#\n" : "# " + c->text + "\n";
      } else if (auto* r = std::get_if<HeaderRec>(&l)) {
        out += r->key + " = " + r->value;
        put_note(out, r->note);
      } else if (auto* r = std::get_if<LabelRec>(&l)) {
        out += std::to_string(r->index) + " " + r->name;
        if (r->qdim) out += " qdim=" + print_expr(*r->qdim);
        if (r->dual) out += " dual=" + std::to_string(*r->dual);
        if (r->weight) out += " weight=" + r->weight->get_str();
        put_note(out, r->note);
      } else if (auto* r = std::get_if<SRec>(&l)) {
        out += std::to_string(r->row) + " " + std::to_string(r->col) + " = " +
               (r->value ? print_expr(*r->value) : "?");
        put_note(out, r->note);
      } else if (auto* r = std::get_if<FusionRec>(&l)) {
        if (r->soft) out += "soft ";
        out += std::to_string(r->i) + " x " + std::to_string(r->j) + " = " + print_terms(r->rhs);
        if (!r->within.empty()) out += " within " + print_ranges(r->within);
        put_note(out, r->note);
      } else if (auto* r = std::get_if<BranchRec>(&l)) {
        out += std::to_string(r->parent_index) + " = " + print_terms(r->rhs);
        put_note(out, r->note);
      }
    }
  }
  return out;
}

}  // namespace modfus
