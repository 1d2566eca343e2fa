#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modfus/cyclo.hpp"
#include "modfus/mdf.hpp"

namespace modfus {

struct ModuleLabel {
  int index = 0;
  std::string name;
  std::optional<int> dual;
  std::optional<Cyclotomic> qdim;  // declared in the file, not derived
  std::optional<Rational> weight;  // metadata only
};

using SMatrix = std::vector<std::vector<std::optional<Cyclotomic>>>;

struct ModularDatum {
  std::string name;
  std::vector<ModuleLabel> labels;
  SMatrix s;
  int vacuum = 0;

  // S is symmetric: an entry given at (i,j) or (j,i) is known at both.
  int size() const { return static_cast<int>(labels.size()); }
  bool known(int i, int j) const { return s[i][j].has_value() || s[j][i].has_value(); }
  // throws MissingEntry
  const Cyclotomic& at(int i, int j) const;
  bool fully_known() const;
  std::size_t unknown_count() const;
  bool row_known(int i) const;
  // Duals from labels when all are declared, otherwise read off S^2 on the
  // fully known rows; -1 where undetermined.
  std::vector<int> duals() const;
};

// Entries are scale * (tabulated value).
ModularDatum datum_from_file(const DatumFile& f);
ModularDatum load_datum(const std::string& path);  // "-" reads stdin

// Copy of `f` with every entry unknown in `f` written from `d` (divided by the
// header scale). Replaced and added records carry `note`.
DatumFile fill_unknowns(const DatumFile& f, const ModularDatum& d, const std::string& note);

// Fill (i,j) from (j,i) wherever only the latter is known.
ModularDatum fill_symmetric(const ModularDatum& d);

// Least common multiple of all known entry orders.
unsigned common_order(const SMatrix& s);
// Exact product of two fully known matrices.
SMatrix multiply(const SMatrix& a, const SMatrix& b);

// Reads i -> i' off S^2; throws NotPermutation or MissingEntry.
std::vector<int> infer_dual(const ModularDatum& d);
// As infer_dual, and stores the result in the labels.
std::vector<int> charge_conjugation(ModularDatum& d);

Cyclotomic qdim(const ModularDatum& d, int i);
Cyclotomic glob(const ModularDatum& d);

struct ValidationReport {
  std::string name;
  int modules = 0;
  std::size_t unknown = 0;
  std::size_t symmetric_pairs_checked = 0;
  std::vector<std::pair<int, int>> symmetry_violations;
  std::vector<int> vacuum_zeros;
  std::vector<std::optional<Cyclotomic>> qdims;
  std::vector<int> nonpositive_qdims;
  std::vector<int> declared_qdim_mismatches;
  bool s2_checked = false;
  bool s2_permutation = false;
  std::vector<std::string> s2_defects;  // truncated list
  std::optional<std::vector<int>> dual;
  std::vector<int> declared_dual_mismatches;
  bool unitarity_checked = false;
  bool unitary = true;

  bool valid() const;
  std::string text() const;
  std::string json() const;
};

ValidationReport validate(const ModularDatum& d);

// Float rendering used in reports: 10 significant digits.
std::string float_str(const Cyclotomic& a);
std::string cycle_str(const std::vector<int>& perm);

}  // namespace modfus
