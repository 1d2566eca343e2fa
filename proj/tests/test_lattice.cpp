#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modfus/errors.hpp"
#include "modfus/lattice.hpp"

using namespace modfus;

TEST_CASE("Verlinde reproduces coset addition") {
  for (int k = 1; k <= 20; ++k) {
    CAPTURE(k);
    ModularDatum d = lattice_modular_data({k});
    REQUIRE(d.size() == 2 * k);
    CHECK(validate(d).valid());
    CHECK(fusion_tensor(d) == expected_group_fusion({k}));
  }
}

TEST_CASE("entries") {
  ModularDatum d = lattice_modular_data({16});
  Cyclotomic r32 = sqrt_int(32).inverse();
  CHECK(d.at(0, 0) == r32);
  CHECK(d.at(1, 1) == root_of_unity(32, -1) * r32);
  CHECK(d.at(16, 16) == r32);
  CHECK(d.at(16, 1) == -r32);
  CHECK(d.at(3, 5) == root_of_unity(32, 17) * r32);

  ModularDatum e = lattice_modular_data({9});
  CHECK(e.at(6, 3) == root_of_unity(18, 0) * sqrt_int(18).inverse());
  CHECK(e.at(1, 2) == root_of_unity(9, -1) / sqrt_int(18));

  ModularDatum f = lattice_modular_data({4});
  CHECK(f.at(2, 2) == Cyclotomic(-1) / sqrt_int(8));
  CHECK(f.at(1, 1) == root_of_unity(8, 7) / sqrt_int(8));
}

TEST_CASE("labels") {
  ModularDatum d = lattice_modular_data({16});
  CHECK(d.labels[16].dual == 16);
  CHECK(d.labels[3].dual == 29);
  CHECK(d.labels[0].weight == Rational(0));
  CHECK(d.labels[31].weight == Rational(1, 64));
  CHECK(d.labels[16].weight == Rational(4));
  CHECK(infer_dual(d) == d.duals());
  for (int j = 0; j < 32; ++j) CHECK(qdim(d, j) == Cyclotomic(1));
}

TEST_CASE("file form round-trips") {
  for (int k : {1, 2, 9}) {
    DatumFile f = lattice_datum_file({k});
    std::string s = serialize(f);
    CHECK(parse_file(s) == f);
    CHECK(serialize(parse_file(s)) == s);
  }
  CHECK(serialize(lattice_datum_file({1})).find("0 1 = E(2)\n") == std::string::npos);
  CHECK_THROWS_AS(lattice_datum_file({0}), IndexOutOfRange);
}

TEST_CASE("group fusion tensor") {
  FusionTensor t = expected_group_fusion({3});
  CHECK(t.size() == 6);
  CHECK(print_sum(product(t, 4, 5)) == "3");
  CHECK(print_sum(product(t, 3, 3)) == "0");
}
