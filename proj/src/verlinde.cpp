#include "modfus/verlinde.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>

#include "modfus/errors.hpp"

namespace modfus {

FusionTensor::FusionTensor(std::vector<int> indices) : idx(std::move(indices)) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  n.assign(idx.size() * idx.size() * idx.size(), 0);
}

FusionTensor FusionTensor::full(int modules) {
  std::vector<int> all(modules);
  std::iota(all.begin(), all.end(), 0);
  return FusionTensor(std::move(all));
}

int FusionTensor::pos(int m) const {
  auto it = std::lower_bound(idx.begin(), idx.end(), m);
  return it != idx.end() && *it == m ? static_cast<int>(it - idx.begin()) : -1;
}

std::int64_t FusionTensor::coeff(int i, int j, int k) const {
  int a = pos(i), b = pos(j), c = pos(k);
  return a < 0 || b < 0 || c < 0 ? 0 : at(a, b, c);
}

namespace {

std::int64_t extract(const Cyclotomic& v, int i, int j, int k) {
  if (!v.is_integer()) throw NonIntegerResult(i, j, k, v.str());
  Rational q = v.to_rational();
  if (!q.get_num().fits_slong_p()) throw NonIntegerResult(i, j, k, v.str());
  long x = q.get_num().get_si();
  if (x < 0) throw NegativeResult(i, j, k, x);
  return x;
}

struct Prep {
  ModularDatum d;
  std::vector<int> dual;
  std::vector<int> idx;
  std::vector<Cyclotomic> inv0;             // 1 / S(0,s)
  std::vector<std::vector<Cyclotomic>> col;  // col[kp][s] = S(s, k')
  Cyclotomic c2;                             // S(0,0)^2
  unsigned order = 1;
};

Prep prepare(const ModularDatum& in, const std::vector<int>& indices) {
  Prep p;
  p.d = fill_symmetric(in);
  const int n = p.d.size();
  if (indices.empty()) {
    p.idx.resize(n);
    std::iota(p.idx.begin(), p.idx.end(), 0);
  } else {
    p.idx = FusionTensor(indices).idx;
  }
  if (!p.d.row_known(0)) throw MissingEntry("vacuum row of S is not fully known");
  p.dual = in.duals();
  for (int m : p.idx) {
    if (m < 0 || m >= n) throw IndexOutOfRange("module " + std::to_string(m));
    if (!p.d.row_known(m)) throw MissingEntry("S row " + std::to_string(m) + " is not fully known");
    if (p.dual[m] < 0 || !p.d.row_known(p.dual[m]))
      throw MissingEntry("dual of module " + std::to_string(m) + " is undetermined");
  }
  // Work with S / S(0,0), whose entries are usually much sparser, and
  // restore the factor S(0,0)^2 per coefficient.
  const Cyclotomic c = *p.d.s[0][0];
  if (c.is_zero()) throw ZeroDivision("S(0,0) = 0");
  p.c2 = c * c;
  const Cyclotomic cinv = c.inverse();
  for (auto& row : p.d.s)
    for (auto& x : row)
      if (x) *x *= cinv;
  p.inv0.resize(n);
  p.order = common_order(p.d.s);
  for (int s = 0; s < n; ++s) {
    const Cyclotomic& x = *p.d.s[0][s];
    if (x.is_zero()) throw ZeroDivision("S(0," + std::to_string(s) + ") = 0");
    p.inv0[s] = x.inverse();
    p.order = std::lcm(p.order, p.inv0[s].order());
  }
  p.col.resize(p.idx.size());
  for (std::size_t kp = 0; kp < p.idx.size(); ++kp)
    for (int s = 0; s < n; ++s) p.col[kp].push_back(*p.d.s[s][p.dual[p.idx[kp]]]);
  return p;
}

// Fills out[k] for the pair (i,j) at positions (ip, jp).
void compute_pair(const Prep& p, std::size_t ip, std::size_t jp, Accumulator& acc, std::int64_t* out) {
  const int n = p.d.size();
  const int i = p.idx[ip], j = p.idx[jp];
  std::vector<Cyclotomic> a(n);
  for (int s = 0; s < n; ++s) {
    const Cyclotomic& x = *p.d.s[i][s];
    const Cyclotomic& y = *p.d.s[j][s];
    if (x.is_zero() || y.is_zero()) continue;
    a[s] = x * y * p.inv0[s];
  }
  for (std::size_t kp = 0; kp < p.idx.size(); ++kp) {
    acc.clear();
    for (int s = 0; s < n; ++s) acc.add_product(a[s], p.col[kp][s]);
    out[kp] = extract(acc.value() * p.c2, i, j, p.idx[kp]);
  }
}

}  // namespace

std::int64_t fusion_coeff(const ModularDatum& in, int i, int j, int k) {
  ModularDatum d = fill_symmetric(in);
  int n = d.size();
  for (int m : {i, j, k})
    if (m < 0 || m >= n) throw IndexOutOfRange("module " + std::to_string(m));
  auto dual = in.duals();
  if (dual[k] < 0) throw MissingEntry("dual of module " + std::to_string(k) + " is undetermined");
  Cyclotomic sum;
  for (int s = 0; s < n; ++s) {
    const Cyclotomic& s0 = d.at(0, s);
    if (s0.is_zero()) throw ZeroDivision("S(0," + std::to_string(s) + ") = 0");
    sum += d.at(i, s) * d.at(j, s) * d.at(s, dual[k]) / s0;
  }
  return extract(sum, i, j, k);
}

FusionTensor fusion_tensor(const ModularDatum& d, const std::vector<int>& indices, int jobs) {
  Prep p = prepare(d, indices);
  FusionTensor t(p.idx);
  const long m = t.size();
  const long pairs = m * m;
  std::vector<std::exception_ptr> err(pairs);
  int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    Accumulator acc(p.order);
#pragma omp for schedule(dynamic)
    for (long q = 0; q < pairs; ++q) {
      try {
        compute_pair(p, q / m, q % m, acc, &t.n[q * m]);
      } catch (...) {
        err[q] = std::current_exception();
      }
    }
  }
  for (const auto& e : err)
    if (e) std::rethrow_exception(e);
  return t;
}

FusionTensor fusion_tensor_serial(const ModularDatum& d, const std::vector<int>& indices) {
  Prep p = prepare(d, indices);
  FusionTensor t(p.idx);
  const std::size_t m = t.size();
  Accumulator acc(p.order);
  for (std::size_t ip = 0; ip < m; ++ip)
    for (std::size_t jp = 0; jp < m; ++jp) compute_pair(p, ip, jp, acc, &t.n[(ip * m + jp) * m]);
  return t;
}

std::vector<int> known_rows(const ModularDatum& d) {
  ModularDatum f = fill_symmetric(d);
  std::vector<int> r;
  for (int i = 0; i < f.size(); ++i)
    if (f.row_known(i)) r.push_back(i);
  return r;
}

FormalSum fuse(const FusionTensor& t, const FormalSum& a, const FormalSum& b) {
  FormalSum r;
  for (const auto& [i, x] : a) {
    int ip = t.pos(i);
    if (ip < 0) throw IndexOutOfRange("module " + std::to_string(i) + " not in tensor");
    for (const auto& [j, y] : b) {
      int jp = t.pos(j);
      if (jp < 0) throw IndexOutOfRange("module " + std::to_string(j) + " not in tensor");
      for (int kp = 0; kp < t.size(); ++kp)
        if (auto c = t.at(ip, jp, kp)) r[t.idx[kp]] += x * y * c;
    }
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

FormalSum product(const FusionTensor& t, int i, int j) { return fuse(t, {{i, 1}}, {{j, 1}}); }

std::string print_sum(const FormalSum& s) {
  if (s.empty()) return "0";
  std::string o;
  for (const auto& [k, m] : s) {
    if (!o.empty()) o += " + ";
    if (m != 1) o += std::to_string(m) + "*";
    o += std::to_string(k);
  }
  return o;
}

PropertyReport check_ring(const FusionTensor& t, const ModularDatum& d) {
  PropertyReport r;
  const int n = t.size();
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (r.failures.size() < 20) r.failures.push_back(what);
  };
  auto tri = [&](int i, int j, int k) {
    return "(" + std::to_string(t.idx[i]) + "," + std::to_string(t.idx[j]) + "," + std::to_string(t.idx[k]) + ")";
  };
  bool full = n == d.size();
  if (!full) fail(r.associative, "tensor does not cover all modules");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t.at(i, j, k) != t.at(j, i, k)) fail(r.commutative, "commutativity at " + tri(i, j, k));
  int v = t.pos(d.vacuum);
  if (v < 0) {
    fail(r.vacuum_identity, "vacuum not in tensor");
  } else {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t.at(v, j, k) != (j == k)) fail(r.vacuum_identity, "vacuum identity at " + tri(v, j, k));
  }
  if (full) {
    std::vector<std::int64_t> lhs(n), rhs(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          std::fill(lhs.begin(), lhs.end(), 0);
          std::fill(rhs.begin(), rhs.end(), 0);
          for (int m = 0; m < n; ++m) {
            if (auto a = t.at(i, j, m))
              for (int l = 0; l < n; ++l) lhs[l] += a * t.at(m, k, l);
            if (auto b = t.at(j, k, m))
              for (int l = 0; l < n; ++l) rhs[l] += b * t.at(i, m, l);
          }
          r.associativity_checked += n;
          if (lhs != rhs) fail(r.associative, "associativity at (" + std::to_string(i) + "," + std::to_string(j) +
                                                  "," + std::to_string(k) + ",*)");
        }
  }
  auto dual = d.duals();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        int kd = dual[t.idx[k]], jd = dual[t.idx[j]];
        if (kd < 0 || jd < 0 || !t.contains(kd) || !t.contains(jd)) {
          fail(r.duality, "dual undetermined at " + tri(i, j, k));
          continue;
        }
        if (t.at(i, j, k) != t.at(i, t.pos(kd), t.pos(jd))) fail(r.duality, "duality at " + tri(i, j, k));
      }
  std::vector<Cyclotomic> q(n);
  for (int i = 0; i < n; ++i) q[i] = qdim(d, t.idx[i]);
  if (full) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Cyclotomic s;
        for (int k = 0; k < n; ++k)
          if (auto c = t.at(i, j, k)) s += Cyclotomic(c) * q[k];
        ++r.qdim_pairs_checked;
        if (s != q[i] * q[j])
          fail(r.qdim_multiplicative, "qdim multiplicativity at (" + std::to_string(t.idx[i]) + "," +
                                          std::to_string(t.idx[j]) + ")");
      }
  } else {
    fail(r.qdim_multiplicative, "qdim multiplicativity needs the full tensor");
  }
  for (int i = 0; i < n; ++i) {
    if (q[i] == Cyclotomic(1)) r.simple_currents.push_back(t.idx[i]);
    bool perm = true;
    std::vector<int> hit(n, 0);
    for (int j = 0; j < n && perm; ++j) {
      int ones = 0;
      for (int k = 0; k < n; ++k) {
        auto c = t.at(i, j, k);
        if (c == 1) {
          ++ones;
          ++hit[k];
        } else if (c != 0) {
          perm = false;
        }
      }
      perm = perm && ones == 1;
    }
    for (int k = 0; k < n && perm; ++k) perm = hit[k] == 1;
    if (perm) r.permutation_matrices.push_back(t.idx[i]);
  }
  if (r.simple_currents != r.permutation_matrices)
    fail(r.simple_currents_permute, "simple currents differ from permutation fusion matrices");
  return r;
}

bool PropertyReport::ok() const {
  return commutative && associative && vacuum_identity && duality && qdim_multiplicative && simple_currents_permute;
}

std::string PropertyReport::text() const {
  auto yn = [](bool b) { return b ? std::string("ok") : std::string("FAILED"); };
  std::ostringstream o;
  o << "commutativity: " << yn(commutative) << "\n";
  o << "associativity: " << yn(associative) << " (" << associativity_checked << " quadruples)\n";
  o << "vacuum identity: " << yn(vacuum_identity) << "\n";
  o << "duality symmetry: " << yn(duality) << "\n";
  o << "qdim multiplicativity: " << yn(qdim_multiplicative) << " (" << qdim_pairs_checked << " pairs)\n";
  o << "simple currents:";
  for (int i : simple_currents) o << " " << i;
  o << "\npermutation fusion matrices:";
  for (int i : permutation_matrices) o << " " << i;
  o << "\n";
  for (const auto& f : failures) o << "  " << f << "\n";
  return o.str();
}

bool Fixture::in_scope(int k) const {
  if (within.empty()) return true;
  for (const auto& r : within)
    if (k >= r.lo && k <= r.hi) return true;
  return false;
}

std::vector<Fixture> fixtures_from_file(const DatumFile& f) {
  std::vector<Fixture> out;
  for (const auto& s : f.sections) {
    if (s.kind != "fusion") continue;
    for (const auto& l : s.lines) {
      const auto* r = std::get_if<FusionRec>(&l);
      if (!r) continue;
      Fixture x;
      x.i = r->i;
      x.j = r->j;
      x.soft = r->soft;
      x.within = r->within;
      x.citation = r->note;
      for (const auto& [k, m] : r->rhs) x.expected[k] += m;
      out.push_back(std::move(x));
    }
  }
  return out;
}

Comparison compare_fixtures(const FusionTensor& t, const std::vector<Fixture>& fixtures) {
  Comparison c;
  for (const auto& f : fixtures) {
    int ip = t.pos(f.i), jp = t.pos(f.j);
    if (ip < 0 || jp < 0) {
      ++c.skipped;
      continue;
    }
    ++c.compared;
    FormalSum want, got;
    for (const auto& [k, m] : f.expected)
      if (f.in_scope(k) && t.contains(k)) want[k] = m;
    for (int kp = 0; kp < t.size(); ++kp)
      if (f.in_scope(t.idx[kp]))
        if (auto v = t.at(ip, jp, kp)) got[t.idx[kp]] = v;
    if (want != got) c.discrepancies.push_back({f, got});
  }
  return c;
}

std::string export_triples(const FusionTensor& t) {
  std::string o;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j)
      for (int k = 0; k < t.size(); ++k)
        if (auto v = t.at(i, j, k))
          o += std::to_string(t.idx[i]) + " " + std::to_string(t.idx[j]) + " " + std::to_string(t.idx[k]) + " " +
               std::to_string(v) + "\n";
  return o;
}

FusionTensor parse_triples(const std::string& text, int modules) {
  struct Row {
    long i, j, k, v;
  };
  std::vector<Row> rows;
  std::set<int> seen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    Row r{};
    if (in >> r.i) {
      std::string rest;
      if (!(in >> r.j >> r.k >> r.v) || (in >> rest)) throw SyntaxError("expected 'i j k N'", pos);
      if (r.i < 0 || r.j < 0 || r.k < 0 || r.v < 0) throw SyntaxError("negative value in triple", pos);
      rows.push_back(r);
      seen.insert({static_cast<int>(r.i), static_cast<int>(r.j), static_cast<int>(r.k)});
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw SyntaxError("expected 'i j k N'", pos);
    }
    pos = nl + 1;
  }
  std::vector<int> idx(seen.begin(), seen.end());
  if (modules > 0) {
    idx.resize(modules);
    std::iota(idx.begin(), idx.end(), 0);
  }
  FusionTensor t(idx);
  for (const auto& r : rows) {
    int a = t.pos(r.i), b = t.pos(r.j), c = t.pos(r.k);
    if (a < 0 || b < 0 || c < 0) throw IndexOutOfRange("triple index outside 0.." + std::to_string(modules - 1));
    if (t.at(a, b, c)) throw DuplicateEntry("triple (" + std::to_string(r.i) + "," + std::to_string(r.j) + "," +
                                            std::to_string(r.k) + ") listed twice");
    t.at(a, b, c) = r.v;
  }
  return t;
}

std::vector<Fixture> fixtures_from_tensor(const FusionTensor& t) {
  std::vector<Fixture> out;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j) {
      Fixture f;
      f.i = t.idx[i];
      f.j = t.idx[j];
      for (int k = 0; k < t.size(); ++k)
        if (auto v = t.at(i, j, k)) f.expected[t.idx[k]] = v;
      f.citation = "table " + std::to_string(f.i) + " x " + std::to_string(f.j);
      out.push_back(std::move(f));
    }
  return out;
}

}  // namespace modfus
