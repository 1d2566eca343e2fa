// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "modfus/branching.hpp"
#include "modfus/errors.hpp"
#include "modfus/lattice.hpp"
#include "modfus/s4_dataset.hpp"

using namespace modfus;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

int failures = 0;

void run(int id, double limit, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Inconsistent& e) {
    o = {false, e.what(), e.certificate};
  } catch (const Underdetermined& e) {
    o = {false, e.what(), e.free_unknowns};
  } catch (const std::exception& e) {
    o = {false, e.what(), {}};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = o.pass && secs < limit;
  failures += !ok;
  std::printf("criterion %d: %s  %s  [%.2f s, limit %.0f s]\n", id, ok ? "PASS" : "FAIL", o.detail.c_str(), secs,
              limit);
  for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
}

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    o.notes.push_back("failed: " + what);
  }
}

bool from_theorem(const Fixture& f, std::initializer_list<const char*> thms) {
  for (const char* t : thms)
    if (f.citation.rfind(t, 0) == 0) return true;
  return false;
}

std::string pair_name(const Fixture& f) { return std::to_string(f.i) + "x" + std::to_string(f.j); }

// Soft fixtures known to disagree with the computed ring; see data/DATA_NOTES.
const std::set<std::string> kSoftCatalogue = {
    "17x20", "17x21", "17x22", "17x23", "17x24", "17x25", "12x15", "13x14", "12x16", "13x17", "15x12",
    "14x13", "15x15", "14x14", "16x12", "17x13", "16x16", "17x17", "5x19",  "5x21",  "5x23",  "5x25"};

Cyclotomic random_element(std::mt19937_64& rng, unsigned n) {
  std::uniform_int_distribution<int> c(-7, 7), d(1, 5);
  std::vector<Rational> v(n);
  for (unsigned e = 0; e < n; ++e)
    if (rng() % 3 == 0) v[e] = Rational(c(rng), d(rng));
  for (auto& q : v) q.canonicalize();
  return Cyclotomic::from_dense(n, v);
}

bool near(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) <= 1e-10 * (1 + std::abs(b)); }

}  // namespace

int main() {
  const Dataset ds = load_dataset();
  ModularDatum completed;
  FusionTensor full;

  run(1, 10, [] {
    Outcome o;
    std::mt19937_64 rng(1);
    std::size_t trials = 0;
    const std::vector<unsigned> orders = {1, 3, 4, 8, 9, 12, 16, 18, 32, 36, 288};
    for (std::size_t oi = 0; oi < orders.size(); ++oi)
      for (int t = 0; t < 40; ++t, ++trials) {
        // c lives in a different field, so sums and products change order
        const unsigned n = orders[oi], m = orders[(oi + 3) % orders.size()];
        Cyclotomic a = random_element(rng, n), b = random_element(rng, n), c = random_element(rng, m);
        expect(o, a + b == b + a && a * b == b * a, "commutativity");
        expect(o, (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c), "associativity");
        expect(o, a * (b + c) == a * b + a * c, "distributivity");
        expect(o, a + Cyclotomic(0) == a && a * Cyclotomic(1) == a && (a - a).is_zero(), "identities");
        if (!a.is_zero()) expect(o, a * a.inverse() == Cyclotomic(1), "inverse");
        expect(o, near(embed(a + b), embed(a) + embed(b)), "embed(a+b)");
        expect(o, near(embed(a * b), embed(a) * embed(b)), "embed(ab)");
        expect(o, near(embed(conj(a)), std::conj(embed(a))), "embed(conj a)");
        if (!b.is_zero()) expect(o, near(embed(a / b), embed(a) / embed(b)), "embed(a/b)");
      }
    for (unsigned long m = 1; m <= 100; ++m) expect(o, sqrt_int(m) * sqrt_int(m) == Cyclotomic(static_cast<long>(m)),
                                                    "sqrt_int(" + std::to_string(m) + ")^2");
    o.detail = "field axioms and embedding on " + std::to_string(trials) + " random triples; sqrt_int(m)^2 = m for m <= 100";
    return o;
  });

  run(2, 30, [] {
    Outcome o;
    for (int k = 1; k <= 20; ++k)
      expect(o, fusion_tensor(lattice_modular_data({k})) == expected_group_fusion({k}), "k = " + std::to_string(k));
    o.detail = "Verlinde tensor equals the Z_2k group ring for k = 1..20";
    return o;
  });

  run(3, 30, [&] {
    Outcome o;
    FusionTensor t = known_block_tensor(ds.partial);
    std::vector<int> want = {0};
    for (int i = 8; i <= 27; ++i) want.push_back(i);
    expect(o, t.idx == want, "block is {0, 8..27}");
    bool nonneg = true;
    for (auto x : t.n) nonneg = nonneg && x >= 0;
    expect(o, nonneg, "nonnegative coefficients");
    std::vector<Fixture> fx;
    for (const auto& f : ds.fixtures)
      if (from_theorem(f, {"Thm 7.1", "Thm 7.3", "Thm 7.4"})) fx.push_back(f);
    Comparison c = compare_fixtures(t, fx);
    std::size_t hard = 0, soft = 0;
    for (const auto& d : c.discrepancies) {
      if (d.fixture.soft) {
        ++soft;
        continue;
      }
      ++hard;
      o.notes.push_back(pair_name(d.fixture) + ": computed " + print_sum(d.computed));
    }
    expect(o, hard == 0, "hard fixtures");
    o.detail = std::to_string(t.size()) + "-module block, " + std::to_string(c.compared) +
               " fixtures in the block compared, " + std::to_string(hard) + " hard discrepancies (" +
               std::to_string(soft) + " soft)";
    return o;
  });

  run(4, 60, [&] {
    Outcome o;
    completed = complete(ds.partial, ds.branchings);
    const ModularDatum& s = completed;
    expect(o, s.fully_known(), "all entries determined");
    bool kept = true;
    for (int i = 0; i < 28; ++i)
      for (int j = 0; j < 28; ++j)
        if (ds.partial.s[i][j]) kept = kept && s.at(i, j) == *ds.partial.s[i][j];
    expect(o, kept, "shipped entries reproduced");
    bool sym = true;
    for (int i = 0; i < 28; ++i)
      for (int j = 0; j < 28; ++j) sym = sym && s.at(i, j) == s.at(j, i);
    expect(o, sym, "S = S^T");
    SMatrix f = fill_symmetric(s).s, sq = multiply(f, f);
    bool inv = true;
    for (int i = 0; i < 28; ++i)
      for (int j = 0; j < 28; ++j) inv = inv && *sq[i][j] == Cyclotomic(i == j ? 1 : 0);
    expect(o, inv, "S^2 = I");
    const Rational v[8] = {Rational(1, 2), Rational(1, 2), 1, Rational(3, 2), Rational(3, 2), 1, 1, 2};
    const Cyclotomic r32 = sqrt_int(32).inverse();
    bool rows = true;
    for (int r : {3, 4})
      for (int c = 0; c < 8; ++c) rows = rows && s.at(r, c) == Cyclotomic(v[c]) * r32;
    expect(o, rows, "rows 3-4, columns 0-7");
    o.detail = std::to_string(ds.partial.unknown_count()) +
               " unknown entries solved; shipped entries kept, S = S^T, S^2 = I, rows 3-4 = (1/2,1/2,1,3/2,3/2,1,1,2)/sqrt(32)";
    return o;
  });

  run(5, 60, [&] {
    Outcome o;
    if (!completed.fully_known()) return Outcome{false, "no completed S", {}};
    full = fusion_tensor(completed);  // throws on non-integral or negative values
    bool nonneg = true;
    for (auto x : full.n) nonneg = nonneg && x >= 0;
    expect(o, full.size() == 28 && nonneg, "28^3 nonnegative integers");
    Comparison c = compare_fixtures(full, ds.fixtures);
    std::size_t hard = 0;
    std::set<std::string> soft;
    for (const auto& d : c.discrepancies) {
      if (d.fixture.soft) {
        soft.insert(pair_name(d.fixture));
        continue;
      }
      ++hard;
      o.notes.push_back(pair_name(d.fixture) + ": computed " + print_sum(d.computed));
    }
    expect(o, hard == 0 && c.skipped == 0, "hard fixtures");
    expect(o, soft == kSoftCatalogue, "soft discrepancies match the catalogue");
    std::string list;
    for (const auto& p : soft) list += (list.empty() ? "" : " ") + p;
    o.notes.push_back("soft discrepancies: " + list);
    o.detail = "21952 coefficients, " + std::to_string(c.compared) + " fixtures compared, " + std::to_string(hard) +
               " hard discrepancies, " + std::to_string(soft.size()) + " soft";
    return o;
  });

  // 6 and 7 reuse the tensor from 5
  auto ring_report = [&] { return check_ring(full, completed); };

  run(6, 60, [&] {
    Outcome o;
    if (full.size() != 28) return Outcome{false, "no full tensor", {}};
    bool q = true;
    for (int i = 0; i < 28; ++i) q = q && qdim(completed, i) == Cyclotomic(kS4Qdims[i]);
    expect(o, q, "qdim column");
    expect(o, glob(completed) == Cyclotomic(1152), "glob = 1152");
    PropertyReport r = ring_report();
    expect(o, r.qdim_multiplicative && r.qdim_pairs_checked == 784, "qdim multiplicativity on 784 pairs");
    expect(o, r.simple_currents == std::vector<int>{0, 1}, "simple currents {0, 1}");
    expect(o, r.simple_currents_permute && r.permutation_matrices == std::vector<int>{0, 1},
           "simple-current fusion matrices are permutations");
    o.detail = "qdims match, glob = 1152 = 24^2*2, multiplicative on " + std::to_string(r.qdim_pairs_checked) +
               " pairs, simple currents {M0, M1} act by permutations";
    return o;
  });

  run(7, 60, [&] {
    Outcome o;
    if (full.size() != 28) return Outcome{false, "no full tensor", {}};
    PropertyReport r = ring_report();
    expect(o, r.commutative, "commutativity");
    expect(o, r.associative && r.associativity_checked == 28ull * 28 * 28 * 28, "associativity on all quadruples");
    expect(o, r.vacuum_identity, "vacuum identity");
    expect(o, r.duality, "N_ij^k = N_ik'^j'");
    for (const auto& f : r.failures) o.notes.push_back(f);
    o.detail = "commutative, associative on " + std::to_string(r.associativity_checked) +
               " quadruples, vacuum identity, duality symmetry";
    return o;
  });

  std::printf("%s\n", failures ? "acceptance: FAILED" : "acceptance: all criteria pass");
  return failures ? 1 : 0;
}
