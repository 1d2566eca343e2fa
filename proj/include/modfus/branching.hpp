#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modfus/lattice.hpp"
#include "modfus/mdf.hpp"
#include "modfus/modular_data.hpp"

namespace modfus {

using CharacterVector = std::map<int, long>;

// Parent coset -> decomposition into target modules.
struct BranchingTable {
  std::string parent;
  LatticeSpec spec;
  std::map<int, CharacterVector> rows;
  std::map<int, std::string> cite;

  std::string origin(int coset) const;
};

std::vector<BranchingTable> branchings_from_file(const DatumFile& f);
// Target modules that occur in no decomposition.
std::vector<int> coverage_gaps(const std::vector<BranchingTable>& tables, int modules);

// With B the branching matrix and S' the parent S, B S = S' B. A coset whose
// decomposition is a single module a yields row a of S as (S' B)_coset.
struct DerivedRow {
  int row = 0;
  int coset = 0;
  std::vector<Cyclotomic> entries;
  std::string chain;
};

std::vector<DerivedRow> derive_rows(const ModularDatum& parent, const BranchingTable& table, const ModularDatum& target);
// The first derivation of `row`; throws Underivable.
DerivedRow derive_row(const ModularDatum& parent, const BranchingTable& table, const ModularDatum& target, int row);

struct RowMismatch {
  int row, col;
  Cyclotomic derived, shipped;
  std::string chain;
  std::vector<std::string> reads;  // decompositions containing module col
};
// Derived entries of `table` that disagree with the target's known entries.
std::vector<RowMismatch> check_derived(const std::vector<DerivedRow>& rows, const BranchingTable& table,
                                       const ModularDatum& target);

struct Unknown {
  int row, col;  // row <= col; stands for both (row,col) and (col,row)
  std::string name() const;
};

struct Equation {
  std::vector<std::pair<int, Rational>> coeffs;  // (unknown, coefficient)
  Cyclotomic rhs;
  std::string origin;
  // Other decompositions entering the relation through column c of B.
  std::vector<std::string> reads;

  std::string describe() const;
};

struct LinearSystem {
  std::vector<Unknown> unknowns;
  std::vector<Equation> equations;
  std::vector<Equation> checks;  // no unknowns: 0 = rhs must hold
};

using Parent = std::pair<ModularDatum, BranchingTable>;

// One relation per (coset, column) of each parent.
LinearSystem assemble_system(const std::vector<Parent>& parents, const ModularDatum& target);
// Throws Inconsistent (with a minimal certificate) or Underdetermined.
ModularDatum solve(const LinearSystem& sys, const ModularDatum& target);

std::vector<Parent> lattice_parents(const std::vector<BranchingTable>& tables);
ModularDatum complete(const ModularDatum& target, const std::vector<BranchingTable>& tables);

// Independent route: with U the modules owning unknown entries and K the rest,
// (S^2)(u,k) = 0 for u in U, k in K gives S[U,U] S[U,K] = -S[U,K] S[K,K].
// Needs only the partial S, no branching data.
ModularDatum complete_by_orthogonality(const ModularDatum& target);

}  // namespace modfus
