#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modfus/mdf.hpp"
#include "modfus/modular_data.hpp"

namespace modfus {

using FormalSum = std::map<int, long>;

// Dense N_{ij}^k over an index set; idx[p] is the module at position p.
struct FusionTensor {
  std::vector<int> idx;
  std::vector<std::int64_t> n;

  explicit FusionTensor(std::vector<int> indices = {});
  static FusionTensor full(int modules);

  int size() const { return static_cast<int>(idx.size()); }
  // Position of module m, or -1.
  int pos(int m) const;
  bool contains(int m) const { return pos(m) >= 0; }
  std::int64_t& at(int i, int j, int k) { return n[(static_cast<std::size_t>(i) * size() + j) * size() + k]; }
  std::int64_t at(int i, int j, int k) const { return n[(static_cast<std::size_t>(i) * size() + j) * size() + k]; }
  // By module index; 0 outside the index set.
  std::int64_t coeff(int i, int j, int k) const;
  bool operator==(const FusionTensor&) const = default;
};

std::int64_t fusion_coeff(const ModularDatum& d, int i, int j, int k);

// Verlinde tensor on `indices` (empty: all modules). Rows i, j and columns
// k must be known for all s. jobs <= 0 uses the OpenMP default.
FusionTensor fusion_tensor(const ModularDatum& d, const std::vector<int>& indices = {}, int jobs = 0);
// Same computation on one thread, no OpenMP.
FusionTensor fusion_tensor_serial(const ModularDatum& d, const std::vector<int>& indices = {});

// Modules whose S row is fully known after symmetric fill.
std::vector<int> known_rows(const ModularDatum& d);

FormalSum fuse(const FusionTensor& t, const FormalSum& a, const FormalSum& b);
FormalSum product(const FusionTensor& t, int i, int j);
std::string print_sum(const FormalSum& s);

struct PropertyReport {
  bool commutative = true;
  bool associative = true;
  std::uint64_t associativity_checked = 0;
  bool vacuum_identity = true;
  bool duality = true;
  bool qdim_multiplicative = true;
  std::size_t qdim_pairs_checked = 0;
  std::vector<int> simple_currents;        // qdim exactly 1
  std::vector<int> permutation_matrices;   // fusion matrix is a permutation
  bool simple_currents_permute = true;
  std::vector<std::string> failures;       // first few counterexamples

  bool ok() const;
  std::string text() const;
};

PropertyReport check_ring(const FusionTensor& t, const ModularDatum& d);

struct Fixture {
  int i = 0, j = 0;
  FormalSum expected;
  std::vector<IndexRange> within;
  bool soft = false;
  std::string citation;
  bool in_scope(int k) const;
};

std::vector<Fixture> fixtures_from_file(const DatumFile& f);

struct Discrepancy {
  Fixture fixture;
  FormalSum computed;  // restricted to the compared indices
};

struct Comparison {
  std::size_t compared = 0;
  std::size_t skipped = 0;  // i or j outside the tensor
  std::vector<Discrepancy> discrepancies;
};

// Compares each fixture on k inside both its scope and the tensor.
Comparison compare_fixtures(const FusionTensor& t, const std::vector<Fixture>& fixtures);

// "i j k N" lines, sorted, zeros omitted.
std::string export_triples(const FusionTensor& t);
FusionTensor parse_triples(const std::string& text, int modules = -1);
// One fixture per (i, j) row of the tensor.
std::vector<Fixture> fixtures_from_tensor(const FusionTensor& t);

}  // namespace modfus
