#pragma once

#include <string>
#include <vector>

#include "modfus/branching.hpp"
#include "modfus/mdf.hpp"
#include "modfus/modular_data.hpp"
#include "modfus/verlinde.hpp"

namespace modfus {

// qdim of M0..M27
inline const std::vector<long> kS4Qdims = {1, 1, 2, 3, 3, 2, 2, 4, 6, 6, 6, 6, 8, 8,
                                           8, 8, 8, 8, 6, 6, 6, 6, 6, 6, 6, 6, 12, 12};

struct Dataset {
  DatumFile datum_file;
  ModularDatum partial;
  std::vector<BranchingTable> branchings;
  std::vector<Fixture> fixtures;
};

// Directory holding s4_partial.mdf, s4_branching.mdf and s4_fixtures.mdf.
std::string default_data_dir();
// Throws on parse errors and QdimMismatch.
Dataset load_dataset(const std::string& dir = default_data_dir());

// S(j,0) = qdim(j) S(0,0) for every declared qdim; throws QdimMismatch.
void check_declared_qdims(const ModularDatum& d);

// Tensor over the fully known rows, computable before completion.
FusionTensor known_block_tensor(const ModularDatum& d, int jobs = 0);

}  // namespace modfus
