#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "modfus/cyclo.hpp"

namespace modfus {

// ---- scalar expressions -------------------------------------------------
//
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := '-'? atom ('^' int)?
//   atom     := rational | 'E' '(' uint ')' | 'sqrt' '(' uint ')' | '(' expr ')'
//   rational := uint ('/' uint)?
//
// A '/' after an integer literal belongs to the literal when a digit follows.
// "-a^n" parses as -(a^n).

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Rat, Root, Sqrt, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  mpz_class num, den;  // Rat, as written (den 1 when absent)
  bool has_den = false;
  unsigned long arg = 0;  // Root/Sqrt
  long exponent = 0;      // Pow
  ExprPtr lhs, rhs;       // unary ops use lhs

  bool operator==(const Expr& o) const;
};

ExprPtr parse_expr(std::string_view text);
Cyclotomic eval_expr(const Expr& e);
Cyclotomic eval_expr(std::string_view text);
std::string print_expr(const Expr& e);

ExprPtr make_rat(const Rational& q);
ExprPtr make_bin(Expr::Kind k, ExprPtr a, ExprPtr b);

// ---- files ----------------------------------------------------------------

struct Comment {
  std::string text;
  bool operator==(const Comment&) const = default;
};

struct HeaderRec {
  std::string key, value;
  std::string note;
  bool operator==(const HeaderRec&) const = default;
};

struct LabelRec {
  int index = 0;
  std::string name;
  ExprPtr qdim;
  std::optional<int> dual;
  std::optional<Rational> weight;
  std::string note;
  bool operator==(const LabelRec& o) const;
};

struct SRec {
  int row = 0, col = 0;
  ExprPtr value;  // null for the unknown marker '?'
  std::string note;
  bool operator==(const SRec& o) const;
};

using Terms = std::vector<std::pair<int, long>>;  // (index, multiplicity) as written

struct IndexRange {
  int lo, hi;
  bool operator==(const IndexRange&) const = default;
};

struct FusionRec {
  bool soft = false;
  int i = 0, j = 0;
  Terms rhs;
  std::vector<IndexRange> within;  // empty: all indices
  std::string note;
  bool operator==(const FusionRec&) const = default;
};

struct BranchRec {
  int parent_index = 0;
  Terms rhs;
  std::string note;
  bool operator==(const BranchRec&) const = default;
};

using Line = std::variant<Comment, HeaderRec, LabelRec, SRec, FusionRec, BranchRec>;

struct Section {
  std::string kind;    // header, labels, S, fusion, branching
  std::string parent;  // branching only
  std::vector<Line> lines;
  bool operator==(const Section&) const = default;
};

struct DatumFile {
  std::vector<Comment> preamble;
  std::vector<Section> sections;
  bool operator==(const DatumFile&) const = default;

  const Section* find(std::string_view kind) const;
  Section* find(std::string_view kind);
  std::vector<const Section*> branchings() const;
  std::optional<std::string> header(std::string_view key) const;
  // header "modules", or -1
  int modules() const;
};

DatumFile parse_file(std::string_view text);
// Whole file, or stdin for "-".
std::string read_text(const std::string& path);
std::string serialize(const DatumFile& d);

// Sums are never empty in files; "0" names module 0.
std::string print_terms(const Terms& t);
std::string print_ranges(const std::vector<IndexRange>& r);

}  // namespace modfus
