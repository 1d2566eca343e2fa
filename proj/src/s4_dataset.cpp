#include "modfus/s4_dataset.hpp"

#include "modfus/errors.hpp"

#ifndef MODFUS_DATA_DIR
#define MODFUS_DATA_DIR "data"
#endif

namespace modfus {

std::string default_data_dir() { return MODFUS_DATA_DIR; }

void check_declared_qdims(const ModularDatum& d) {
  ModularDatum f = fill_symmetric(d);
  for (const auto& l : f.labels) {
    if (!l.qdim) continue;
    if (!f.known(l.index, 0) || !f.known(0, 0))
      throw MissingEntry("S(" + std::to_string(l.index) + ",0) needed to check the declared qdim");
    if (*f.s[l.index][0] != *l.qdim * *f.s[0][0])
      throw QdimMismatch("S(" + std::to_string(l.index) + ",0) = " + f.s[l.index][0]->str() + " but qdim " +
                         l.qdim->str() + " gives " + (*l.qdim * *f.s[0][0]).str());
  }
}

Dataset load_dataset(const std::string& dir) {
  Dataset ds;
  ds.datum_file = parse_file(read_text(dir + "/s4_partial.mdf"));
  ds.partial = datum_from_file(ds.datum_file);
  check_declared_qdims(ds.partial);
  ds.branchings = branchings_from_file(parse_file(read_text(dir + "/s4_branching.mdf")));
  ds.fixtures = fixtures_from_file(parse_file(read_text(dir + "/s4_fixtures.mdf")));
  return ds;
}

FusionTensor known_block_tensor(const ModularDatum& d, int jobs) { return fusion_tensor(d, known_rows(d), jobs); }

}  // namespace modfus
