#include "modfus/branching.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "modfus/errors.hpp"

namespace modfus {

std::string BranchingTable::origin(int coset) const {
  std::string s = parent + " coset " + std::to_string(coset);
  auto it = cite.find(coset);
  if (it != cite.end() && !it->second.empty()) s += " [" + it->second + "]";
  return s;
}

std::vector<BranchingTable> branchings_from_file(const DatumFile& f) {
  std::vector<BranchingTable> out;
  for (const Section* s : f.branchings()) {
    BranchingTable t;
    t.parent = s->parent;
    t.spec.k = std::stoi(s->parent.substr(s->parent.find(':') + 1));
    for (const auto& l : s->lines) {
      const auto* r = std::get_if<BranchRec>(&l);
      if (!r) continue;
      auto& v = t.rows[r->parent_index];
      for (const auto& [k, m] : r->rhs) v[k] += m;
      t.cite[r->parent_index] = r->note;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<int> coverage_gaps(const std::vector<BranchingTable>& tables, int modules) {
  std::vector<bool> seen(modules);
  for (const auto& t : tables)
    for (const auto& [c, v] : t.rows)
      for (const auto& [a, m] : v)
        if (a >= 0 && a < modules && m) seen[a] = true;
  std::vector<int> gaps;
  for (int a = 0; a < modules; ++a)
    if (!seen[a]) gaps.push_back(a);
  return gaps;
}

namespace {

void require_complete(const BranchingTable& t) {
  for (int c = 0; c < t.spec.modules(); ++c)
    if (!t.rows.count(c)) throw Underivable(t.parent + " has no decomposition for coset " + std::to_string(c));
}

// (S' B)(coset, c) for every coset and target module c.
std::vector<std::vector<Cyclotomic>> transformed(const ModularDatum& parent, const BranchingTable& t, int n) {
  require_complete(t);
  const int np = t.spec.modules();
  if (parent.size() != np) throw IndexOutOfRange("parent datum size differs from " + t.parent);
  std::vector<std::vector<Cyclotomic>> out(np, std::vector<Cyclotomic>(n));
  for (int l = 0; l < np; ++l)
    for (int mu = 0; mu < np; ++mu) {
      const Cyclotomic& s = parent.at(l, mu);
      for (const auto& [c, m] : t.rows.at(mu)) out[l][c] += s * Cyclotomic(m);
    }
  return out;
}

}  // namespace

std::vector<DerivedRow> derive_rows(const ModularDatum& parent, const BranchingTable& t, const ModularDatum& target) {
  const int n = target.size();
  auto sb = transformed(parent, t, n);
  std::vector<DerivedRow> out;
  for (const auto& [l, v] : t.rows) {
    if (v.size() != 1 || v.begin()->second != 1) continue;
    out.push_back({v.begin()->first, l, sb[l], t.origin(l)});
  }
  return out;
}

DerivedRow derive_row(const ModularDatum& parent, const BranchingTable& t, const ModularDatum& target, int row) {
  for (auto& r : derive_rows(parent, t, target))
    if (r.row == row) return r;
  throw Underivable("module " + std::to_string(row) + " is not isolated by any coset of " + t.parent);
}

std::vector<RowMismatch> check_derived(const std::vector<DerivedRow>& rows, const BranchingTable& t,
                                       const ModularDatum& target) {
  ModularDatum f = fill_symmetric(target);
  std::vector<RowMismatch> out;
  for (const auto& r : rows)
    for (int c = 0; c < f.size(); ++c)
      if (f.s[r.row][c] && *f.s[r.row][c] != r.entries[c]) {
        RowMismatch m{r.row, c, r.entries[c], *f.s[r.row][c], r.chain, {}};
        for (const auto& [mu, w] : t.rows)
          if (mu != r.coset && w.count(c)) m.reads.push_back(t.origin(mu));
        out.push_back(std::move(m));
      }
  return out;
}

std::string Equation::describe() const {
  std::string s = origin;
  for (std::size_t i = 0; i < reads.size(); ++i) s += (i ? ", " : "; reads ") + reads[i];
  return s;
}

std::string Unknown::name() const { return "S(" + std::to_string(row) + "," + std::to_string(col) + ")"; }

LinearSystem assemble_system(const std::vector<Parent>& parents, const ModularDatum& target) {
  LinearSystem sys;
  ModularDatum f = fill_symmetric(target);
  const int n = f.size();
  std::map<std::pair<int, int>, int> uid;
  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c)
      if (!f.s[a][c]) {
        uid[{a, c}] = static_cast<int>(sys.unknowns.size());
        sys.unknowns.push_back({a, c});
      }
  if (sys.unknowns.empty()) return sys;
  for (const auto& [parent, t] : parents) {
    auto sb = transformed(parent, t, n);
    for (const auto& [l, v] : t.rows)
      for (int c = 0; c < n; ++c) {
        Equation e;
        e.rhs = sb[l][c];
        std::map<int, Rational> co;
        for (const auto& [a, m] : v) {
          if (f.s[a][c]) {
            e.rhs -= *f.s[a][c] * Cyclotomic(m);
          } else {
            co[uid.at({std::min(a, c), std::max(a, c)})] += m;
          }
        }
        for (auto& [u, q] : co)
          if (sgn(q)) e.coeffs.emplace_back(u, q);
        e.origin = t.origin(l) + ", column " + std::to_string(c);
        for (const auto& [mu, w] : t.rows)
          if (mu != l && w.count(c)) e.reads.push_back(t.origin(mu));
        (e.coeffs.empty() ? sys.checks : sys.equations).push_back(std::move(e));
      }
  }
  return sys;
}

namespace {

struct Elimination {
  std::vector<std::vector<Rational>> a;
  std::vector<Cyclotomic> b;
  std::vector<std::vector<Rational>> prov;  // row combination of the input rows
  std::vector<int> pivot_col;                // per row, -1 if none
  int rank = 0;
};

Elimination eliminate(const LinearSystem& sys, const std::vector<int>& rows, bool track) {
  const std::size_t u = sys.unknowns.size(), m = rows.size();
  Elimination el;
  el.a.assign(m, std::vector<Rational>(u));
  el.b.resize(m);
  if (track) el.prov.assign(m, std::vector<Rational>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const Equation& e = sys.equations[rows[r]];
    for (const auto& [x, q] : e.coeffs) el.a[r][x] = q;
    el.b[r] = e.rhs;
    if (track) el.prov[r][r] = 1;
  }
  el.pivot_col.assign(m, -1);
  std::size_t row = 0;
  for (std::size_t c = 0; c < u && row < m; ++c) {
    std::size_t p = row;
    while (p < m && sgn(el.a[p][c]) == 0) ++p;
    if (p == m) continue;
    std::swap(el.a[p], el.a[row]);
    std::swap(el.b[p], el.b[row]);
    if (track) std::swap(el.prov[p], el.prov[row]);
    Rational inv = 1 / el.a[row][c];
    for (auto& x : el.a[row]) x *= inv;
    el.b[row] *= Cyclotomic(inv);
    if (track)
      for (auto& x : el.prov[row]) x *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || sgn(el.a[r][c]) == 0) continue;
      Rational fct = el.a[r][c];
      for (std::size_t k = c; k < u; ++k)
        if (sgn(el.a[row][k])) el.a[r][k] -= fct * el.a[row][k];
      el.b[r] -= el.b[row] * Cyclotomic(fct);
      if (track)
        for (std::size_t k = 0; k < m; ++k)
          if (sgn(el.prov[row][k])) el.prov[r][k] -= fct * el.prov[row][k];
    }
    el.pivot_col[row] = static_cast<int>(c);
    ++row;
  }
  el.rank = static_cast<int>(row);
  return el;
}

// Index of a row reading 0 = nonzero, or -1.
int contradiction(const Elimination& el) {
  for (std::size_t r = el.rank; r < el.b.size(); ++r)
    if (!el.b[r].is_zero()) return static_cast<int>(r);
  return -1;
}

}  // namespace

ModularDatum solve(const LinearSystem& sys, const ModularDatum& target) {
  for (const auto& c : sys.checks)
    if (!c.rhs.is_zero()) {
      std::size_t bad = 0;
      for (const auto& x : sys.checks) bad += !x.rhs.is_zero();
      throw Inconsistent(std::to_string(bad) + " relation(s) without unknowns fail on known entries",
                         {c.describe() + ": residual " + c.rhs.str()});
    }
  ModularDatum out = fill_symmetric(target);
  if (sys.unknowns.empty()) return out;
  std::vector<int> all(sys.equations.size());
  std::iota(all.begin(), all.end(), 0);
  Elimination el = eliminate(sys, all, true);
  if (int r = contradiction(el); r >= 0) {
    std::vector<int> subset;
    for (std::size_t k = 0; k < all.size(); ++k)
      if (sgn(el.prov[r][k])) subset.push_back(all[k]);
    // shrink to a minimal contradicting subset by deletion
    for (std::size_t i = 0; i < subset.size();) {
      std::vector<int> trial = subset;
      trial.erase(trial.begin() + i);
      if (contradiction(eliminate(sys, trial, false)) >= 0) subset = std::move(trial);
      else ++i;
    }
    std::vector<std::string> cert;
    for (int k : subset) cert.push_back(sys.equations[k].describe());
    throw Inconsistent("branching relations contradict each other (" + std::to_string(subset.size()) +
                           " equations in a minimal subset)",
                       cert);
  }
  if (el.rank < static_cast<int>(sys.unknowns.size())) {
    std::vector<bool> pivot(sys.unknowns.size());
    for (int r = 0; r < el.rank; ++r) pivot[el.pivot_col[r]] = true;
    std::vector<std::string> free;
    for (std::size_t u = 0; u < pivot.size(); ++u)
      if (!pivot[u]) free.push_back(sys.unknowns[u].name());
    throw Underdetermined(std::to_string(free.size()) + " unknown(s) not fixed by the relations", free);
  }
  for (int r = 0; r < el.rank; ++r) {
    const Unknown& x = sys.unknowns[el.pivot_col[r]];
    out.s[x.row][x.col] = el.b[r];
    out.s[x.col][x.row] = el.b[r];
  }
  return out;
}

std::vector<Parent> lattice_parents(const std::vector<BranchingTable>& tables) {
  std::vector<Parent> out;
  for (const auto& t : tables) out.emplace_back(lattice_modular_data(t.spec), t);
  return out;
}

ModularDatum complete(const ModularDatum& target, const std::vector<BranchingTable>& tables) {
  return solve(assemble_system(lattice_parents(tables), target), target);
}

namespace {

// Solves X A = B for X (r x u) given A (u x m), B (r x m), m >= u.
std::vector<std::vector<Cyclotomic>> solve_right(std::vector<std::vector<Cyclotomic>> a,
                                                 std::vector<std::vector<Cyclotomic>> b,
                                                 const std::vector<std::string>& names) {
  const std::size_t u = a.size(), m = a.empty() ? 0 : a[0].size(), r = b.size();
  // Work on the transpose: A^T x = b^T, one right-hand side per row of B.
  std::vector<std::vector<Cyclotomic>> at(m, std::vector<Cyclotomic>(u)), bt(m, std::vector<Cyclotomic>(r));
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < m; ++j) at[j][i] = a[i][j];
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m; ++j) bt[j][i] = b[i][j];
  std::size_t row = 0;
  std::vector<int> piv;
  for (std::size_t c = 0; c < u && row < m; ++c) {
    std::size_t p = row;
    while (p < m && at[p][c].is_zero()) ++p;
    if (p == m) throw Underdetermined("orthogonality relations leave " + names[c] + " free", {names[c]});
    std::swap(at[p], at[row]);
    std::swap(bt[p], bt[row]);
    Cyclotomic inv = at[row][c].inverse();
    for (auto& x : at[row]) x *= inv;
    for (auto& x : bt[row]) x *= inv;
    for (std::size_t q = 0; q < m; ++q) {
      if (q == row || at[q][c].is_zero()) continue;
      Cyclotomic f = at[q][c];
      for (std::size_t k = c; k < u; ++k) at[q][k] -= f * at[row][k];
      for (std::size_t k = 0; k < r; ++k) bt[q][k] -= f * bt[row][k];
    }
    piv.push_back(static_cast<int>(c));
    ++row;
  }
  for (std::size_t q = row; q < m; ++q)
    for (std::size_t k = 0; k < r; ++k)
      if (!bt[q][k].is_zero()) throw Inconsistent("orthogonality relations are inconsistent", {"residual " + bt[q][k].str()});
  std::vector<std::vector<Cyclotomic>> x(r, std::vector<Cyclotomic>(u));
  for (std::size_t q = 0; q < row; ++q)
    for (std::size_t k = 0; k < r; ++k) x[k][piv[q]] = bt[q][k];
  return x;
}

}  // namespace

ModularDatum complete_by_orthogonality(const ModularDatum& target) {
  ModularDatum f = fill_symmetric(target);
  const int n = f.size();
  std::vector<int> uu, kk;
  for (int i = 0; i < n; ++i) (f.row_known(i) ? kk : uu).push_back(i);
  if (uu.empty()) return f;
  auto dual = target.duals();
  for (int k : kk)
    if (dual[k] < 0 || std::find(kk.begin(), kk.end(), dual[k]) == kk.end())
      throw Underivable("dual of known module " + std::to_string(k) + " is not among the known rows");
  // A = S[U,K], C = S[K,K]; B = -A C
  std::vector<std::vector<Cyclotomic>> a(uu.size(), std::vector<Cyclotomic>(kk.size()));
  for (std::size_t i = 0; i < uu.size(); ++i)
    for (std::size_t j = 0; j < kk.size(); ++j) a[i][j] = f.at(uu[i], kk[j]);
  unsigned ord = common_order(f.s);
  Accumulator acc(ord);
  std::vector<std::vector<Cyclotomic>> b(uu.size(), std::vector<Cyclotomic>(kk.size()));
  for (std::size_t i = 0; i < uu.size(); ++i)
    for (std::size_t j = 0; j < kk.size(); ++j) {
      acc.clear();
      for (int m : kk) acc.add_product(*f.s[uu[i]][m], *f.s[m][kk[j]]);
      b[i][j] = -acc.value();
    }
  std::vector<std::string> names;
  for (int v : uu) names.push_back("column " + std::to_string(v));
  auto x = solve_right(a, b, names);
  for (std::size_t i = 0; i < uu.size(); ++i)
    for (std::size_t j = 0; j < uu.size(); ++j) {
      auto& slot = f.s[uu[i]][uu[j]];
      if (slot && *slot != x[i][j])
        throw Inconsistent("orthogonality contradicts a known entry",
                           {"S(" + std::to_string(uu[i]) + "," + std::to_string(uu[j]) + ")"});
      slot = x[i][j];
    }
  return f;
}

}  // namespace modfus
