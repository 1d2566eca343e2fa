#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "modfus/errors.hpp"
#include "modfus/mdf.hpp"
#include "modfus/s4_dataset.hpp"

using namespace modfus;

namespace {

using K = Expr::Kind;

ExprPtr node(K k, unsigned long arg = 0, long exponent = 0, ExprPtr lhs = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->arg = arg;
  e->exponent = exponent;
  e->lhs = std::move(lhs);
  return e;
}

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  int pick = static_cast<int>(rng() % (depth > 0 ? 9 : 3));
  switch (pick) {
    case 0: {
      auto e = std::make_shared<Expr>();
      e->kind = K::Rat;
      e->num = static_cast<long>(rng() % 20);
      e->has_den = rng() % 2;
      e->den = e->has_den ? static_cast<long>(1 + rng() % 12) : 1;
      return e;
    }
    case 1:
      return node(K::Root, 1 + rng() % 36);
    case 2:
      return node(K::Sqrt, 1 + rng() % 50);
    case 3:
      return node(K::Neg, 0, 0, random_expr(rng, depth - 1));
    case 4:
      return node(K::Pow, 0, static_cast<long>(rng() % 7) - 2, random_expr(rng, depth - 1));
    default: {
      static const K ops[] = {K::Add, K::Sub, K::Mul, K::Div};
      return make_bin(ops[rng() % 4], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    }
  }
}

std::string random_word(std::mt19937_64& rng) {
  static const std::string chars = "abcXYZ_^+-(),/0123456789{}";
  std::string s;
  for (int i = 0, n = 1 + static_cast<int>(rng() % 8); i < n; ++i) s += chars[rng() % chars.size()];
  return s;
}

Terms random_terms(std::mt19937_64& rng, int n) {
  Terms t;
  for (int i = 0, m = 1 + static_cast<int>(rng() % 4); i < m; ++i)
    t.emplace_back(static_cast<int>(rng() % n), 1 + static_cast<long>(rng() % 3));
  return t;
}

DatumFile random_file(std::mt19937_64& rng) {
  DatumFile d;
  int n = 1 + static_cast<int>(rng() % 6);
  if (rng() % 2) d.preamble.push_back(Comment{"generated " + random_word(rng)});
  Section h{"header", "", {}};
  h.lines.push_back(HeaderRec{"name", "gen " + random_word(rng), ""});
  h.lines.push_back(HeaderRec{"modules", std::to_string(n), rng() % 2 ? "count" : ""});
  if (rng() % 2) h.lines.push_back(HeaderRec{"scale", print_expr(*random_expr(rng, 2)), ""});
  d.sections.push_back(h);
  Section l{"labels", "", {}};
  for (int i = 0; i < n; ++i) {
    LabelRec r;
    r.index = i;
    r.name = "M" + random_word(rng);
    if (rng() % 2) r.qdim = random_expr(rng, 2);
    if (rng() % 2) r.dual = static_cast<int>(rng() % n);
    if (rng() % 2) r.weight = Rational(static_cast<long>(rng() % 50) - 25, 1 + static_cast<long>(rng() % 16));
    if (r.weight) r.weight->canonicalize();
    if (rng() % 3 == 0) r.note = "note " + random_word(rng);
    l.lines.push_back(r);
  }
  d.sections.push_back(l);
  Section s{"S", "", {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (rng() % 3 == 0) continue;
      SRec r;
      r.row = i;
      r.col = j;
      if (rng() % 4) r.value = random_expr(rng, 3);
      if (rng() % 5 == 0) r.note = "cell " + random_word(rng);
      s.lines.push_back(r);
      if (rng() % 7 == 0) s.lines.push_back(Comment{"between " + random_word(rng)});
    }
  d.sections.push_back(s);
  Section f{"fusion", "", {}};
  for (int i = 0, m = static_cast<int>(rng() % 5); i < m; ++i) {
    FusionRec r;
    r.soft = rng() % 3 == 0;
    r.i = static_cast<int>(rng() % n);
    r.j = static_cast<int>(rng() % n);
    r.rhs = random_terms(rng, n);
    if (rng() % 2) r.within.push_back({0, static_cast<int>(rng() % n)});
    if (rng() % 2) r.note = "cite " + random_word(rng);
    f.lines.push_back(r);
  }
  if (!f.lines.empty()) d.sections.push_back(f);
  if (rng() % 2) {
    int k = 1 + static_cast<int>(rng() % 4);
    Section b{"branching", "lattice:" + std::to_string(k), {}};
    for (int c = 0; c < 2 * k; ++c)
      if (rng() % 2) b.lines.push_back(BranchRec{c, random_terms(rng, n), rng() % 2 ? "eq " + random_word(rng) : ""});
    d.sections.push_back(b);
  }
  return d;
}

}  // namespace

TEST_CASE("expression examples") {
  CHECK(eval_expr("1/6") == Cyclotomic(Rational(1, 6)));
  CHECK(parse_expr("1/6")->kind == K::Rat);
  CHECK(eval_expr("E(4)") == root_of_unity(4, 1));
  CHECK(std::abs(eval_expr("E(4)").embed() - std::complex<double>(0, 1)) < 1e-12);
  Cyclotomic w1 = Cyclotomic(Rational(4, 3)) * (root_of_unity(18, 1) + root_of_unity(18, 17));
  CHECK(eval_expr("4/3*(E(18)+E(18)^17)") == w1);
  CHECK(eval_expr("sqrt(2)^2") == Cyclotomic(2));
  CHECK(eval_expr("(E(8)+E(8)^7)/sqrt(2)") == Cyclotomic(1));
  CHECK_THROWS_AS(eval_expr("1/(E(3)+E(3)^2+1)"), ZeroDivision);
}

TEST_CASE("expression grammar") {
  CHECK(eval_expr(" 2 * 3 + 4 ") == Cyclotomic(10));
  CHECK(eval_expr("2-3-4") == Cyclotomic(-5));
  CHECK(eval_expr("12/3/2") == Cyclotomic(2));
  CHECK(eval_expr("-2^2") == Cyclotomic(-4));
  CHECK(eval_expr("(-2)^2") == Cyclotomic(4));
  CHECK(eval_expr("E(8)^-1") == root_of_unity(8, 7));
  CHECK(eval_expr("2*-3") == Cyclotomic(-6));
  CHECK(eval_expr("1/-2") == Cyclotomic(Rational(-1, 2)));
  CHECK(eval_expr("123456789012345678901234567890/3") == Cyclotomic(Rational(mpz_class("41152263004115226300411522630"))));
  CHECK(parse_expr("6/4")->has_den);
  CHECK(eval_expr("6/4") == Cyclotomic(Rational(3, 2)));
  // '/' followed by a non-digit is division
  CHECK(parse_expr("1/E(4)")->kind == K::Div);
  CHECK_THROWS_AS(eval_expr("1/0"), ZeroDivision);
  CHECK_THROWS_AS(eval_expr("0^-1"), ZeroDivision);
  CHECK_NOTHROW(parse_expr("1/0"));
}

TEST_CASE("syntax errors carry the byte offset") {
  auto offset = [](std::string_view s) -> long {
    try {
      parse_expr(s);
    } catch (const SyntaxError& e) {
      return static_cast<long>(e.offset);
    }
    return -1;
  };
  CHECK(offset("1+") == 2);
  CHECK(offset("2*)") == 2);
  CHECK(offset("E(0)") == 2);
  CHECK(offset("sqrt(x)") == 5);
  CHECK(offset("1 2") == 2);
  CHECK(offset("(1+2") == 4);
  CHECK(offset("") == 0);
  CHECK(offset("2^^3") == 2);
  CHECK(offset("1+1") == -1);
}

TEST_CASE("expression printing round-trips") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    ExprPtr e = random_expr(rng, 4);
    std::string s = print_expr(*e);
    ExprPtr back = parse_expr(s);
    INFO(s);
    REQUIRE(*back == *e);
    CHECK(print_expr(*back) == s);
  }
}

TEST_CASE("minimal file round-trips") {
  const char* text =
      "[header]\n"
      "name = trivial\n"
      "modules = 1\n"
      "vacuum = 0\n"
      "\n"
      "[labels]\n"
      "0 V qdim=1 dual=0\n"
      "\n"
      "[S]\n"
      "0 0 = 1\n";
  DatumFile d = parse_file(text);
  CHECK(serialize(d) == text);
  CHECK(parse_file(serialize(d)) == d);
  CHECK(d.modules() == 1);
}

TEST_CASE("file round-trip property") {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 300; ++t) {
    DatumFile d = random_file(rng);
    std::string s = serialize(d);
    INFO(s);
    DatumFile back = parse_file(s);
    REQUIRE(back == d);
    CHECK(serialize(back) == s);
  }
}

TEST_CASE("comments and notes") {
  DatumFile d = parse_file("# top\n[header]\n# inside\nmodules = 2  # two\n\n[fusion]\nsoft 1 x 1 = 0 within 0-1  # (x)\n");
  REQUIRE(d.preamble.size() == 1);
  CHECK(d.preamble[0].text == "top");
  const Section* h = d.find("header");
  REQUIRE(h);
  CHECK(std::get<Comment>(h->lines[0]).text == "inside");
  CHECK(std::get<HeaderRec>(h->lines[1]).note == "two");
  const auto& f = std::get<FusionRec>(d.find("fusion")->lines[0]);
  CHECK(f.soft);
  CHECK(f.rhs == Terms{{0, 1}});
  CHECK(f.within == std::vector<IndexRange>{{0, 1}});
  CHECK(f.note == "(x)");
}

TEST_CASE("structural errors") {
  const std::string head = "[header]\nmodules = 2\n\n";
  CHECK_THROWS_AS(parse_file(head + "[S]\n0 0 = 1\n0 0 = 2\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file(head + "[S]\n0 2 = 1\n"), IndexOutOfRange);
  CHECK_THROWS_AS(parse_file(head + "[labels]\n0 a\n0 b\n1 c\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file(head + "[labels]\n0 a\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file(head + "[labels]\n0 a qdim=1 qdim=2\n1 b\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file(head + "[labels]\n0 a colour=1\n1 b\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file(head + "[fusion]\n0 x 3 = 1\n"), IndexOutOfRange);
  CHECK_THROWS_AS(parse_file(head + "[fusion]\n0 x 1 =\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file(head + "[branching parent=\"lattice:1\"]\n2 = 0\n"), IndexOutOfRange);
  CHECK_THROWS_AS(parse_file(head + "[branching parent=\"lattice:1\"]\n1 = 0\n1 = 1\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file(head + "[branching]\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file(head + "[header]\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file("[header]\nmodules = 1\nmodules = 1\n"), DuplicateEntry);
  CHECK_THROWS_AS(parse_file("[S]\n0 0 = 1\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file("0 0 = 1\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file("[colours]\n"), SyntaxError);
  CHECK_THROWS_AS(parse_file(head + "[S]\n0 0 = 1+\n"), SyntaxError);
}

TEST_CASE("syntax error offset is relative to the file") {
  std::string text = "[header]\nmodules = 1\n\n[S]\n0 0 = 1+*\n";
  try {
    parse_file(text);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == text.find("*"));
  }
}

TEST_CASE("shipped data files parse and round-trip") {
  const std::string dir = default_data_dir();
  for (const char* name : {"s4_partial.mdf", "s4_branching.mdf", "s4_fixtures.mdf", "s4_completed.mdf"}) {
    INFO(name);
    std::string text = read_text(dir + "/" + name);
    CHECK(serialize(parse_file(text)) == text);
  }
  DatumFile d = parse_file(read_text(dir + "/s4_partial.mdf"));
  std::size_t valued = 0, unknown = 0, labels = 0;
  for (const auto& l : d.find("S")->lines)
    if (auto* r = std::get_if<SRec>(&l)) (r->value ? valued : unknown)++;
  for (const auto& l : d.find("labels")->lines) labels += std::holds_alternative<LabelRec>(l);
  CHECK(labels == 28);
  CHECK(valued == 21 * 28);
  CHECK(unknown == 49);
}
