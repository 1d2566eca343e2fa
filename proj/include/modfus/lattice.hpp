#pragma once

#include "modfus/mdf.hpp"
#include "modfus/modular_data.hpp"
#include "modfus/verlinde.hpp"

namespace modfus {

// Rank-1 even lattice Z alpha with (alpha, alpha) = 2k. Coset j stands for
// lambda_j = j alpha / 2k, j = 0..2k-1 (the symmetric range -k+1..k maps in
// by j mod 2k).
struct LatticeSpec {
  int k = 1;
  int modules() const { return 2 * k; }
};

// S(j,l) = zeta_{2k}^(-jl) / sqrt(2k), dual(j) = -j mod 2k.
DatumFile lattice_datum_file(const LatticeSpec& spec);
ModularDatum lattice_modular_data(const LatticeSpec& spec);
// Coset addition: N_{ij}^l = 1 iff l = i + j mod 2k.
FusionTensor expected_group_fusion(const LatticeSpec& spec);

}  // namespace modfus
