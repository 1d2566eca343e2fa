#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "modfus/errors.hpp"
#include "modfus/s4_dataset.hpp"

using namespace modfus;

namespace {

const Dataset& ds() {
  static const Dataset d = load_dataset();
  return d;
}

const FusionTensor& block() {
  static const FusionTensor t = known_block_tensor(ds().partial);
  return t;
}

std::vector<int> block_indices() {
  std::vector<int> v(21);
  std::iota(v.begin() + 1, v.end(), 8);
  return v;
}

}  // namespace

TEST_CASE("load") {
  CHECK(ds().partial.size() == 28);
  CHECK(ds().partial.name == "V_L2^S4 partial");
  CHECK(ds().partial.unknown_count() == 49);
  CHECK(ds().branchings.size() == 3);
  CHECK(ds().fixtures.size() == 494);
  std::size_t soft = 0;
  for (const auto& f : ds().fixtures) soft += f.soft;
  CHECK(soft == 30);
  CHECK(ds().partial.at(0, 0) == (Cyclotomic(6) * sqrt_int(32)).inverse());
  CHECK(ds().partial.labels[8].weight == Rational(1, 16));
  CHECK(ds().partial.labels[9].weight == Rational(49, 16));
  for (int i = 0; i < 28; ++i) {
    CAPTURE(i);
    REQUIRE(ds().partial.labels[i].qdim);
    CHECK(*ds().partial.labels[i].qdim == Cyclotomic(kS4Qdims[i]));
  }
}

TEST_CASE("declared qdims are checked against S") {
  std::string text = read_text(default_data_dir() + "/s4_partial.mdf");
  auto at = text.find(" qdim=4");
  REQUIRE(at != std::string::npos);
  text.replace(at, 7, " qdim=5");
  ModularDatum d = datum_from_file(parse_file(text));
  CHECK_THROWS_AS(check_declared_qdims(d), QdimMismatch);
  CHECK_NOTHROW(check_declared_qdims(ds().partial));
}

TEST_CASE("known block") {
  CHECK(known_rows(ds().partial) == block_indices());
  const FusionTensor& t = block();
  CHECK(t.idx == block_indices());
  for (auto x : t.n) CHECK(x >= 0);
  CHECK(t.coeff(18, 18, 12) == 1);
  CHECK(t.coeff(0, 9, 9) == 1);
  CHECK(t.coeff(2, 2, 2) == 0);  // outside the block
  CHECK(print_sum(product(t, 8, 18)) == "18 + 19 + 26 + 27");
  // the block part of 26 x 26
  CHECK(print_sum(product(t, 26, 26)) == "0 + 8 + 9 + 10 + 11 + 2*12 + 2*13 + 2*14 + 2*15 + 2*16 + 2*17");
  CHECK(fusion_tensor_serial(ds().partial, block_indices()) == t);
  CHECK_THROWS_AS(fusion_tensor(ds().partial), MissingEntry);
}

TEST_CASE("known block is the restriction of the full tensor") {
  ModularDatum full = load_datum(default_data_dir() + "/s4_completed.mdf");
  FusionTensor f = fusion_tensor(full, block_indices());
  CHECK(f == block());
}

TEST_CASE("fixtures on the known block") {
  Comparison c = compare_fixtures(block(), ds().fixtures);
  CHECK(c.compared + c.skipped == ds().fixtures.size());
  CHECK(c.compared > 0);
  std::size_t hard = 0;
  for (const auto& d : c.discrepancies) hard += !d.fixture.soft;
  CHECK(hard == 0);
  CHECK(c.discrepancies.size() == 18);
}
