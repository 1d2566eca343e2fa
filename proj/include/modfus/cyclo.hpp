#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace modfus {

using Rational = mpq_class;

// Element of Q(zeta_n), zeta_n = exp(2 pi i / n), over the Zumbroich basis.
//
// For n = prod p^e write an exponent's p-component as j0 + p^(e-1)*j1.
// Basis exponents have j1 != 0 for every odd p and j1 == 0 for p = 2.
// The order is always the conductor: elements of Q have order 1, and no
// order is ever 2 mod 4.
class Cyclotomic {
 public:
  struct Term {
    unsigned exp;
    Rational coeff;
    bool operator==(const Term& o) const { return exp == o.exp && coeff == o.coeff; }
  };

  Cyclotomic() = default;
  Cyclotomic(long v);  // NOLINT(google-explicit-constructor)
  Cyclotomic(const Rational& q);  // NOLINT(google-explicit-constructor)

  static Cyclotomic root_of_unity(unsigned n, long k);
  // Canonicalizes sum v[e] zeta_n^e; v.size() must equal n.
  static Cyclotomic from_dense(unsigned n, std::vector<Rational> v);

  unsigned order() const { return order_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return order_ == 1; }
  bool is_integer() const;
  // Requires is_rational().
  Rational to_rational() const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator/=(const Cyclotomic& o);

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);

  bool operator==(const Cyclotomic& o) const { return order_ == o.order_ && terms_ == o.terms_; }
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

  Cyclotomic inverse() const;
  Cyclotomic conj() const;
  Cyclotomic pow(long e) const;

  std::complex<double> embed() const;
  // Sum of c*E(n)^e terms; parseable by the mdf expression grammar.
  std::string str() const;

 private:
  unsigned order_ = 1;
  std::vector<Term> terms_;

  friend class Accumulator;
};

Cyclotomic root_of_unity(unsigned n, long k);
Cyclotomic inverse(const Cyclotomic& a);
Cyclotomic conj(const Cyclotomic& a);
Cyclotomic sqrt_int(unsigned long m);
std::complex<double> embed(const Cyclotomic& a);

// Exponents of the Zumbroich basis of Q(zeta_n), ascending.
std::vector<unsigned> zumbroich_basis(unsigned n);
unsigned euler_phi(unsigned n);

// Dense sum at a fixed order n. Terms are added unreduced and canonicalized
// once in value(); every operand's order must divide n.
class Accumulator {
 public:
  explicit Accumulator(unsigned n);
  unsigned order() const { return n_; }
  void clear();
  void add(const Cyclotomic& a);
  void add_product(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic value() const;

 private:
  unsigned n_;
  std::vector<Rational> v_;
  Rational tmp_;
};

}  // namespace modfus
