#include "modfus/lattice.hpp"

#include "modfus/errors.hpp"

namespace modfus {

DatumFile lattice_datum_file(const LatticeSpec& spec) {
  if (spec.k < 1) throw IndexOutOfRange("lattice k must be positive");
  const int n = spec.modules();
  DatumFile f;
  Section h{"header", "", {}};
  h.lines.push_back(HeaderRec{"name", "V_L, L = Z alpha, (alpha,alpha) = " + std::to_string(n), ""});
  h.lines.push_back(HeaderRec{"modules", std::to_string(n), ""});
  h.lines.push_back(HeaderRec{"vacuum", "0", ""});
  h.lines.push_back(HeaderRec{"scale", "1/sqrt(" + std::to_string(n) + ")", ""});
  Section l{"labels", "", {}};
  for (int j = 0; j < n; ++j) {
    LabelRec r;
    r.index = j;
    r.name = "V_{L+" + std::to_string(j) + "/" + std::to_string(n) + "}";
    r.qdim = make_rat(1);
    r.dual = (n - j) % n;
    // the coset minimum sits at the representative of smallest norm
    int jm = j <= spec.k ? j : n - j;
    r.weight = Rational(jm * jm, 2 * n);
    r.weight->canonicalize();
    l.lines.push_back(r);
  }
  Section s{"S", "", {}};
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      SRec r;
      r.row = j;
      r.col = m;
      long e = (static_cast<long>(n) - (static_cast<long>(j) * m) % n) % n;
      if (e == 0) {
        r.value = make_rat(1);
      } else {
        auto root = std::make_shared<Expr>();
        root->kind = Expr::Kind::Root;
        root->arg = n;
        if (e == 1) {
          r.value = root;
        } else {
          auto p = std::make_shared<Expr>();
          p->kind = Expr::Kind::Pow;
          p->exponent = e;
          p->lhs = root;
          r.value = p;
        }
      }
      s.lines.push_back(r);
    }
  f.sections = {h, l, s};
  return f;
}

ModularDatum lattice_modular_data(const LatticeSpec& spec) { return datum_from_file(lattice_datum_file(spec)); }

FusionTensor expected_group_fusion(const LatticeSpec& spec) {
  const int n = spec.modules();
  FusionTensor t = FusionTensor::full(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.at(i, j, (i + j) % n) = 1;
  return t;
}

}  // namespace modfus
