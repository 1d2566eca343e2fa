#include "modfus/modular_data.hpp"

#include <cstdio>
#include <numeric>
#include <set>

#include "json.hpp"
#include "modfus/errors.hpp"

namespace modfus {

const Cyclotomic& ModularDatum::at(int i, int j) const {
  if (s[i][j]) return *s[i][j];
  if (s[j][i]) return *s[j][i];
  throw MissingEntry("S(" + std::to_string(i) + "," + std::to_string(j) + ") is unknown");
  return *s[i][j];
}

bool ModularDatum::fully_known() const { return unknown_count() == 0; }

std::size_t ModularDatum::unknown_count() const {
  std::size_t n = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) n += !known(i, j);
  return n;
}

bool ModularDatum::row_known(int i) const {
  for (int j = 0; j < size(); ++j)
    if (!known(i, j)) return false;
  return true;
}

std::vector<int> ModularDatum::duals() const {
  int n = size();
  std::vector<int> d(n, -1);
  bool all = true;
  for (int i = 0; i < n; ++i) {
    if (labels[i].dual) d[i] = *labels[i].dual;
    else all = false;
  }
  if (all) return d;
  if (fully_known()) return infer_dual(*this);
  ModularDatum f = fill_symmetric(*this);
  std::vector<int> rows;
  for (int i = 0; i < n; ++i)
    if (f.row_known(i)) rows.push_back(i);
  Accumulator acc(common_order(f.s));
  for (int i : rows) {
    d[i] = -1;
    for (int m : rows) {
      acc.clear();
      for (int t = 0; t < n; ++t) acc.add_product(*f.s[i][t], *f.s[t][m]);
      if (acc.value() == Cyclotomic(1)) d[i] = m;
    }
  }
  return d;
}

ModularDatum datum_from_file(const DatumFile& f) {
  ModularDatum d;
  int n = f.modules();
  if (n < 1) throw SyntaxError("missing [header] modules", 0);
  d.name = f.header("name").value_or("");
  d.vacuum = f.header("vacuum") ? std::stoi(*f.header("vacuum")) : 0;
  if (d.vacuum != 0) throw IndexOutOfRange("vacuum must be index 0");
  Cyclotomic scale(1);
  if (auto sc = f.header("scale")) scale = eval_expr(*sc);
  if (scale.is_zero()) throw ZeroDivision("scale is zero");
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    d.labels[i].index = i;
    d.labels[i].name = "M" + std::to_string(i);
  }
  if (const Section* ls = f.find("labels")) {
    for (const auto& l : ls->lines) {
      const auto* r = std::get_if<LabelRec>(&l);
      if (!r) continue;
      auto& lab = d.labels[r->index];
      lab.name = r->name;
      lab.dual = r->dual;
      lab.weight = r->weight;
      if (r->qdim) lab.qdim = eval_expr(*r->qdim);
    }
  }
  d.s.assign(n, std::vector<std::optional<Cyclotomic>>(n));
  if (const Section* ss = f.find("S")) {
    for (const auto& l : ss->lines) {
      const auto* r = std::get_if<SRec>(&l);
      if (!r || !r->value) continue;
      d.s[r->row][r->col] = scale * eval_expr(*r->value);
    }
  }
  return d;
}

ModularDatum load_datum(const std::string& path) { return datum_from_file(parse_file(read_text(path))); }

DatumFile fill_unknowns(const DatumFile& f, const ModularDatum& d, const std::string& note) {
  DatumFile out = f;
  Cyclotomic scale(1);
  if (auto sc = f.header("scale")) scale = eval_expr(*sc);
  Cyclotomic inv = scale.inverse();
  const int n = d.size();
  std::vector<std::vector<bool>> valued(n, std::vector<bool>(n)), listed(n, std::vector<bool>(n));
  Section* ss = out.find("S");
  if (!ss) {
    out.sections.push_back({"S", "", {}});
    ss = &out.sections.back();
  }
  for (const auto& l : ss->lines)
    if (const auto* r = std::get_if<SRec>(&l)) {
      listed[r->row][r->col] = true;
      if (r->value) valued[r->row][r->col] = true;
    }
  auto value = [&](int r, int c) { return parse_expr((d.at(r, c) * inv).str()); };
  for (auto& l : ss->lines)
    if (auto* r = std::get_if<SRec>(&l); r && !r->value && !valued[r->col][r->row]) {
      r->value = value(r->row, r->col);
      r->note = note;
    }
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c)
      if (!listed[r][c] && !listed[c][r]) ss->lines.push_back(SRec{r, c, value(r, c), note});
  return out;
}

ModularDatum fill_symmetric(const ModularDatum& d) {
  ModularDatum r = d;
  for (int i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.size(); ++j)
      if (!r.s[i][j] && d.s[j][i]) r.s[i][j] = d.s[j][i];
  return r;
}

unsigned common_order(const SMatrix& s) {
  unsigned n = 1;
  for (const auto& row : s)
    for (const auto& x : row)
      if (x) n = std::lcm(n, x->order());
  return n;
}

SMatrix multiply(const SMatrix& a, const SMatrix& b) {
  std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  unsigned ord = std::lcm(common_order(a), common_order(b));
  Accumulator acc(ord);
  SMatrix c(n, std::vector<std::optional<Cyclotomic>>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      acc.clear();
      for (std::size_t t = 0; t < k; ++t) {
        if (!a[i][t] || !b[t][j]) throw MissingEntry("matrix product over unknown entries");
        acc.add_product(*a[i][t], *b[t][j]);
      }
      c[i][j] = acc.value();
    }
  return c;
}

namespace {

// S^2 defects; fills perm when S^2 is a 0/1 permutation matrix.
std::vector<std::string> square_defects(const ModularDatum& d, std::vector<int>& perm) {
  SMatrix sq = multiply(d.s, d.s);
  int n = d.size();
  std::vector<std::string> bad;
  perm.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int ones = 0;
    for (int j = 0; j < n; ++j) {
      const Cyclotomic& x = *sq[i][j];
      if (x == Cyclotomic(1)) {
        ++ones;
        perm[i] = j;
      } else if (!x.is_zero()) {
        bad.push_back("S^2(" + std::to_string(i) + "," + std::to_string(j) + ") = " + x.str());
      }
    }
    if (ones != 1) bad.push_back("row " + std::to_string(i) + " of S^2 has " + std::to_string(ones) + " ones");
  }
  if (bad.empty()) {
    std::vector<int> seen(n, 0);
    for (int i = 0; i < n; ++i)
      if (seen[perm[i]]++) bad.push_back("column " + std::to_string(perm[i]) + " of S^2 has several ones");
  }
  return bad;
}

}  // namespace

std::vector<int> infer_dual(const ModularDatum& d) {
  if (!d.fully_known()) throw MissingEntry("S is not fully known");
  std::vector<int> perm;
  auto bad = square_defects(fill_symmetric(d), perm);
  if (!bad.empty()) throw NotPermutation(bad.front());
  return perm;
}

std::vector<int> charge_conjugation(ModularDatum& d) {
  auto perm = infer_dual(d);
  for (int i = 0; i < d.size(); ++i) d.labels[i].dual = perm[i];
  return perm;
}

Cyclotomic qdim(const ModularDatum& d, int i) {
  const Cyclotomic& s00 = d.at(0, 0);
  if (s00.is_zero()) throw ZeroDivision("S(0,0) = 0");
  return d.at(i, 0) / s00;
}

Cyclotomic glob(const ModularDatum& d) {
  Cyclotomic g;
  for (int i = 0; i < d.size(); ++i) {
    Cyclotomic q = qdim(d, i);
    g += q * q;
  }
  return g;
}

ValidationReport validate(const ModularDatum& raw) {
  ValidationReport r;
  r.name = raw.name;
  r.modules = raw.size();
  r.unknown = raw.unknown_count();
  int n = raw.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (raw.s[i][j] && raw.s[j][i]) {
        ++r.symmetric_pairs_checked;
        if (*raw.s[i][j] != *raw.s[j][i]) r.symmetry_violations.emplace_back(i, j);
      }
  const ModularDatum d = fill_symmetric(raw);
  for (int j = 0; j < n; ++j)
    if (d.s[0][j] && d.s[0][j]->is_zero()) r.vacuum_zeros.push_back(j);
  r.qdims.resize(n);
  bool s00_ok = d.s[0][0] && !d.s[0][0]->is_zero();
  for (int i = 0; i < n; ++i) {
    if (!s00_ok || !d.s[i][0]) continue;
    Cyclotomic q = qdim(d, i);
    auto z = q.embed();
    if (q != q.conj() || !(z.real() > 0)) r.nonpositive_qdims.push_back(i);
    if (d.labels[i].qdim && *d.labels[i].qdim != q) r.declared_qdim_mismatches.push_back(i);
    r.qdims[i] = std::move(q);
  }
  if (d.fully_known()) {
    r.s2_checked = true;
    std::vector<int> perm;
    auto bad = square_defects(d, perm);
    r.s2_permutation = bad.empty();
    if (bad.size() > 20) bad.resize(20);
    r.s2_defects = std::move(bad);
    if (r.s2_permutation) {
      r.dual = perm;
      for (int i = 0; i < n; ++i)
        if (d.labels[i].dual && *d.labels[i].dual != perm[i]) r.declared_dual_mismatches.push_back(i);
    }
    bool real = true;
    for (const auto& row : d.s)
      for (const auto& x : row) real = real && *x == x->conj();
    if (!real) {
      r.unitarity_checked = true;
      SMatrix ct(n, std::vector<std::optional<Cyclotomic>>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ct[i][j] = d.s[j][i]->conj();
      SMatrix u = multiply(d.s, ct);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.unitary = r.unitary && *u[i][j] == Cyclotomic(i == j ? 1 : 0);
    }
  }
  return r;
}

bool ValidationReport::valid() const {
  return symmetry_violations.empty() && vacuum_zeros.empty() && nonpositive_qdims.empty() &&
         declared_qdim_mismatches.empty() && declared_dual_mismatches.empty() &&
         (!s2_checked || s2_permutation) && unitary;
}

std::string float_str(const Cyclotomic& a) {
  auto z = a.embed();
  char buf[64];
  if (a == a.conj()) {
    std::snprintf(buf, sizeof buf, "%.10g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
  }
  return buf;
}

std::string cycle_str(const std::vector<int>& perm) {
  std::string s;
  std::vector<bool> seen(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    s += "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) s += " ";
      s += std::to_string(j);
      first = false;
      j = perm[j];
    }
    s += ")";
  }
  return s;
}

namespace {

std::string pairs_str(const std::vector<std::pair<int, int>>& v) {
  std::string s;
  for (const auto& [i, j] : v) s += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
  return s;
}

std::string ints_str(const std::vector<int>& v) {
  std::string s;
  for (int i : v) s += " " + std::to_string(i);
  return s;
}

}  // namespace

std::string ValidationReport::text() const {
  std::string o;
  o += "datum: " + (name.empty() ? std::string("(unnamed)") : name) + " (" + std::to_string(modules) +
       " modules)\n";
  o += "unknown entries: " + std::to_string(unknown) + "\n";
  o += "symmetry: ";
  o += symmetry_violations.empty()
           ? "ok (" + std::to_string(symmetric_pairs_checked) + " pairs checked)\n"
           : std::to_string(symmetry_violations.size()) + " violations:" + pairs_str(symmetry_violations) + "\n";
  o += "vacuum row: ";
  o += vacuum_zeros.empty() ? "no zero entries\n" : "zero entries at" + ints_str(vacuum_zeros) + "\n";
  for (int i = 0; i < modules; ++i)
    if (qdims[i]) o += "qdim " + std::to_string(i) + " = " + qdims[i]->str() + " (" + float_str(*qdims[i]) + ")\n";
  if (!nonpositive_qdims.empty()) o += "non-positive qdim at" + ints_str(nonpositive_qdims) + "\n";
  if (!declared_qdim_mismatches.empty())
    o += "declared qdim differs from S at" + ints_str(declared_qdim_mismatches) + "\n";
  if (!s2_checked) {
    o += "S²=C: not checked (S has unknown entries)\n";
  } else if (s2_permutation) {
    bool id = true;
    for (int i = 0; i < modules; ++i) id = id && (*dual)[i] == i;
    o += id ? "S²=C: identity\n" : "S²=C: permutation " + cycle_str(*dual) + "\n";
  } else {
    o += "S²=C: not a permutation matrix\n";
    for (const auto& s : s2_defects) o += "  " + s + "\n";
  }
  if (!declared_dual_mismatches.empty())
    o += "declared dual differs from S² at" + ints_str(declared_dual_mismatches) + "\n";
  if (unitarity_checked) o += std::string("unitarity: ") + (unitary ? "ok\n" : "FAILED\n");
  o += valid() ? "status: valid\n" : "status: INVALID\n";
  return o;
}

std::string ValidationReport::json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["modules"] = modules;
  j["unknown_entries"] = unknown;
  j["valid"] = valid();
  j["symmetry_pairs_checked"] = symmetric_pairs_checked;
  j["symmetry_violations"] = nlohmann::json::array();
  for (const auto& [a, b] : symmetry_violations) j["symmetry_violations"].push_back({a, b});
  j["vacuum_zeros"] = vacuum_zeros;
  j["qdim"] = nlohmann::json::array();
  for (int i = 0; i < modules; ++i) {
    if (!qdims[i]) {
      j["qdim"].push_back(nullptr);
      continue;
    }
    j["qdim"].push_back({{"exact", qdims[i]->str()}, {"float", qdims[i]->embed().real()}});
  }
  j["nonpositive_qdims"] = nonpositive_qdims;
  j["declared_qdim_mismatches"] = declared_qdim_mismatches;
  j["s2_checked"] = s2_checked;
  j["s2_permutation"] = s2_permutation;
  j["s2_defects"] = s2_defects;
  j["dual"] = dual ? nlohmann::json(*dual) : nlohmann::json(nullptr);
  j["declared_dual_mismatches"] = declared_dual_mismatches;
  j["unitarity_checked"] = unitarity_checked;
  j["unitary"] = unitary;
  return j.dump(2) + "\n";
}

}  // namespace modfus
