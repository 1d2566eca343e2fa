#include "modfus/cyclo.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "modfus/errors.hpp"

namespace modfus {

namespace {

struct PrimePower {
  unsigned p, e, pe;
};

std::vector<PrimePower> factor(unsigned n) {
  std::vector<PrimePower> f;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.pe *= p;
    }
    f.push_back(pp);
  }
  if (n > 1) f.push_back({n, 1, n});
  return f;
}

unsigned digit(unsigned k, const PrimePower& pp) { return (k % pp.pe) / (pp.pe / pp.p); }

bool valid(unsigned k, const PrimePower& pp) {
  unsigned d = digit(k, pp);
  return pp.p == 2 ? d == 0 : d != 0;
}

// Rewrite v in the Zumbroich basis of order n, in place.
void reduce(unsigned n, const std::vector<PrimePower>& f, std::vector<Rational>& v) {
  for (const auto& pp : f) {
    unsigned step = n / pp.p;
    for (unsigned k = 0; k < n; ++k) {
      if (sgn(v[k]) == 0 || valid(k, pp)) continue;
      Rational c = v[k];
      v[k] = 0;
      if (pp.p == 2) {
        v[(k + step) % n] -= c;
      } else {
        for (unsigned i = 1; i < pp.p; ++i) v[(k + i * step) % n] -= c;
      }
    }
  }
}

// One deflation step on a reduced vector. Returns the new order, or 0.
unsigned deflate(unsigned n, const std::vector<PrimePower>& f, const std::vector<Rational>& v,
                 std::vector<Rational>& w) {
  if (n % 4 == 2) {
    unsigned m = n / 2;
    w.assign(m, 0);
    for (unsigned k = 0; k < n; ++k)
      if (sgn(v[k]) != 0) w[k / 2] = v[k];
    return m;
  }
  for (const auto& pp : f) {
    unsigned m = n / pp.p;
    if (pp.e >= 2) {
      bool ok = true;
      for (unsigned k = 0; k < n && ok; ++k)
        if (sgn(v[k]) != 0 && k % pp.p) ok = false;
      if (!ok) continue;
      w.assign(m, 0);
      for (unsigned k = 0; k < n; k += pp.p) w[k / pp.p] = v[k];
      return m;
    }
    if (pp.p == 2) continue;
    // p exactly divides n: each class {k0 + i m : i = 1..p-1}, k0 = 0 mod p,
    // must carry a constant coefficient c, which becomes -c at zeta_m^(k0/p).
    bool ok = true;
    for (unsigned j = 0; j < m && ok; ++j) {
      unsigned k0 = j * pp.p;
      const Rational& c = v[(k0 + m) % n];
      for (unsigned i = 2; i < pp.p && ok; ++i)
        if (v[(k0 + i * m) % n] != c) ok = false;
    }
    if (!ok) continue;
    w.assign(m, 0);
    for (unsigned j = 0; j < m; ++j) w[j] = -v[(j * pp.p + m) % n];
    return m;
  }
  return 0;
}

unsigned lift_factor(unsigned from, unsigned to) {
  if (to % from) throw std::logic_error("cyclotomic order does not divide target order");
  return to / from;
}

std::vector<Rational> lifted(const Cyclotomic& a, unsigned n) {
  std::vector<Rational> v(n);
  unsigned s = lift_factor(a.order(), n);
  for (const auto& t : a.terms()) v[t.exp * s] += t.coeff;
  return v;
}

}  // namespace

unsigned euler_phi(unsigned n) {
  unsigned r = n;
  for (const auto& pp : factor(n)) r = r / pp.p * (pp.p - 1);
  return r;
}

std::vector<unsigned> zumbroich_basis(unsigned n) {
  auto f = factor(n);
  std::vector<unsigned> b;
  for (unsigned k = 0; k < n; ++k) {
    bool ok = true;
    for (const auto& pp : f) ok = ok && valid(k, pp);
    if (ok) b.push_back(k);
  }
  return b;
}

Cyclotomic::Cyclotomic(long v) {
  if (v) terms_.push_back({0, Rational(v)});
}

Cyclotomic::Cyclotomic(const Rational& q) {
  if (sgn(q)) {
    terms_.push_back({0, q});
    terms_[0].coeff.canonicalize();
  }
}

Cyclotomic Cyclotomic::from_dense(unsigned n, std::vector<Rational> v) {
  if (n == 0 || v.size() != n) throw std::invalid_argument("from_dense: size mismatch");
  for (auto& x : v) x.canonicalize();
  std::vector<Rational> w;
  for (;;) {
    auto f = factor(n);
    reduce(n, f, v);
    unsigned m = deflate(n, f, v, w);
    if (!m) break;
    n = m;
    v.swap(w);
  }
  Cyclotomic r;
  r.order_ = n;
  for (unsigned k = 0; k < n; ++k)
    if (sgn(v[k]) != 0) r.terms_.push_back({k, std::move(v[k])});
  return r;
}

Cyclotomic Cyclotomic::root_of_unity(unsigned n, long k) {
  if (n == 0) throw std::invalid_argument("root_of_unity: n must be positive");
  long e = k % static_cast<long>(n);
  if (e < 0) e += n;
  std::vector<Rational> v(n);
  v[e] = 1;
  return from_dense(n, std::move(v));
}

bool Cyclotomic::is_integer() const {
  if (!is_rational()) return false;
  return terms_.empty() || terms_[0].coeff.get_den() == 1;
}

Rational Cyclotomic::to_rational() const {
  if (!is_rational()) throw std::logic_error("to_rational on irrational cyclotomic " + str());
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (order_ == 1 && o.order_ == 1) {
    Rational s = terms_[0].coeff + o.terms_[0].coeff;
    return *this = Cyclotomic(s);
  }
  unsigned n = std::lcm(order_, o.order_);
  auto v = lifted(*this, n);
  unsigned s = n / o.order_;
  for (const auto& t : o.terms_) v[t.exp * s] += t.coeff;
  return *this = from_dense(n, std::move(v));
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this += -o; }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.order_ == 1 || b.order_ == 1) {
    const Cyclotomic& x = a.order_ == 1 ? b : a;
    const Rational& q = a.order_ == 1 ? a.terms_[0].coeff : b.terms_[0].coeff;
    Cyclotomic r = x;
    for (auto& t : r.terms_) t.coeff *= q;
    return r;
  }
  unsigned n = std::lcm(a.order_, b.order_);
  unsigned sa = n / a.order_, sb = n / b.order_;
  // Multiply integral numerators over a common denominator; one gcd per
  // output coordinate instead of one per term product.
  auto numerators = [](const Cyclotomic& c, mpz_class& den) {
    den = 1;
    for (const auto& t : c.terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    std::vector<mpz_class> out;
    out.reserve(c.terms_.size());
    for (const auto& t : c.terms_) out.push_back(t.coeff.get_num() * (den / t.coeff.get_den()));
    return out;
  };
  mpz_class da, db;
  auto an = numerators(a, da), bn = numerators(b, db);
  std::vector<mpz_class> acc(n);
  for (std::size_t i = 0; i < an.size(); ++i)
    for (std::size_t j = 0; j < bn.size(); ++j)
      mpz_addmul(acc[(a.terms_[i].exp * sa + b.terms_[j].exp * sb) % n].get_mpz_t(), an[i].get_mpz_t(),
                 bn[j].get_mpz_t());
  const mpz_class den = da * db;
  std::vector<Rational> v(n);
  for (unsigned k = 0; k < n; ++k)
    if (sgn(acc[k])) v[k] = Rational(acc[k], den);
  return Cyclotomic::from_dense(n, std::move(v));
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) { return *this = *this * o; }

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

Cyclotomic& Cyclotomic::operator/=(const Cyclotomic& o) { return *this = *this / o; }

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw ZeroDivision();
  if (order_ == 1) return Cyclotomic(Rational(1) / terms_[0].coeff);
  // Work with d*a, which has integral coordinates, so that no denominators
  // appear until the final division.
  mpz_class d = 1;
  for (const auto& x : terms_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.coeff.get_den_mpz_t());
  Cyclotomic x = *this * Cyclotomic(Rational(d));
  // With H the automorphisms of Q(zeta_n) fixing Q(zeta_{n/p}), multiplying
  // x by prod_{h != 1} h(x) gives the relative norm, which lies in the
  // smaller field. Repeat down to Q: a^-1 = d * (product of the factors) / norm.
  Cyclotomic acc(1);
  while (x.order_ != 1) {
    const unsigned n = x.order_, p = factor(n).front().p, m = n / p;
    Cyclotomic b(1);
    for (unsigned t = 1; t < p; ++t) {
      unsigned g = 1 + t * m;
      if (std::gcd(g, n) != 1) continue;
      std::vector<Rational> v(n);
      for (const auto& y : x.terms_) v[static_cast<unsigned long>(y.exp) * g % n] += y.coeff;
      b *= from_dense(n, std::move(v));
    }
    acc *= b;
    x *= b;
  }
  return acc * Cyclotomic(Rational(d) / x.terms_[0].coeff);
}

Cyclotomic Cyclotomic::conj() const {
  if (order_ == 1) return *this;
  std::vector<Rational> v(order_);
  for (const auto& t : terms_) v[(order_ - t.exp) % order_] = t.coeff;
  return from_dense(order_, std::move(v));
}

Cyclotomic Cyclotomic::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Cyclotomic r(1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

std::complex<double> Cyclotomic::embed() const {
  std::complex<double> z = 0;
  for (const auto& t : terms_) {
    double ang = 2 * std::numbers::pi * t.exp / order_;
    z += t.coeff.get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return z;
}

std::string Cyclotomic::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (s.empty()) {
      if (neg) s += "-";
    } else {
      s += neg ? "-" : "+";
    }
    if (t.exp == 0) {
      s += c.get_str();
      continue;
    }
    if (c != 1) s += c.get_str() + "*";
    s += "E(" + std::to_string(order_) + ")";
    if (t.exp != 1) s += "^" + std::to_string(t.exp);
  }
  return s;
}

Cyclotomic root_of_unity(unsigned n, long k) { return Cyclotomic::root_of_unity(n, k); }
Cyclotomic inverse(const Cyclotomic& a) { return a.inverse(); }
Cyclotomic conj(const Cyclotomic& a) { return a.conj(); }
std::complex<double> embed(const Cyclotomic& a) { return a.embed(); }

namespace {

Cyclotomic sqrt_prime(unsigned p) {
  if (p == 2) return root_of_unity(8, 1) + root_of_unity(8, 7);
  std::vector<Rational> v(p);
  for (unsigned a = 0; a < p; ++a) v[(static_cast<unsigned long>(a) * a) % p] += 1;
  Cyclotomic g = Cyclotomic::from_dense(p, std::move(v));
  if (p % 4 == 3) g *= root_of_unity(4, 3);
  if (g.embed().real() < 0) g = -g;
  return g;
}

}  // namespace

Cyclotomic sqrt_int(unsigned long m) {
  if (m == 0) return {};
  Rational outside = 1;
  Cyclotomic r(1);
  for (unsigned long p = 2; p * p <= m; ++p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) outside *= p;
    if (e % 2) r *= sqrt_prime(static_cast<unsigned>(p));
  }
  if (m > 1) r *= sqrt_prime(static_cast<unsigned>(m));
  return r * Cyclotomic(outside);
}

Accumulator::Accumulator(unsigned n) : n_(n), v_(n) {}

void Accumulator::clear() {
  for (auto& x : v_) x = 0;
}

void Accumulator::add(const Cyclotomic& a) {
  unsigned s = lift_factor(a.order_, n_);
  for (const auto& t : a.terms_) v_[t.exp * s] += t.coeff;
}

void Accumulator::add_product(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.is_zero() || b.is_zero()) return;
  unsigned sa = lift_factor(a.order_, n_), sb = lift_factor(b.order_, n_);
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      mpq_mul(tmp_.get_mpq_t(), x.coeff.get_mpq_t(), y.coeff.get_mpq_t());
      auto& dst = v_[(x.exp * sa + y.exp * sb) % n_];
      mpq_add(dst.get_mpq_t(), dst.get_mpq_t(), tmp_.get_mpq_t());
    }
}

Cyclotomic Accumulator::value() const { return Cyclotomic::from_dense(n_, v_); }

}  // namespace modfus
