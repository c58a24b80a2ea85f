#include "redorb/poly.hpp"

#include <algorithm>
#include <cmath>

namespace redorb {

ZPoly zpoly_of(const std::vector<long>& coeffs) {
  std::vector<mpz_class> c;
  for (long v : coeffs) c.emplace_back(v);
  return {c, RingTag::integers()};
}

QPoly qpoly_of(const std::vector<long>& coeffs) {
  std::vector<mpq_class> c;
  for (long v : coeffs) c.emplace_back(v);
  return {c, RingTag::rationals()};
}

namespace {

template <class V>
void trim(V& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

int deg(const DenseZ& a) { return static_cast<int>(a.size()) - 1; }

mpz_class content(const DenseZ& a) {
  mpz_class g = 0;
  for (const auto& c : a) g = gcd(g, c);
  return g;
}

mpz_class zpow(const mpz_class& b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// lc(b)^(deg a - deg b + 1) a = b q + r
DenseZ prem(DenseZ a, const DenseZ& b) {
  const int db = deg(b);
  const mpz_class& lb = b.back();
  int delta = deg(a) - db + 1;
  while (!a.empty() && deg(a) >= db) {
    mpz_class la = a.back();
    int shift = deg(a) - db;
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
    a.pop_back();
    trim(a);
    --delta;
  }
  if (delta > 0) {
    mpz_class s = zpow(lb, delta);
    for (auto& c : a) c *= s;
  }
  return a;
}

}  // namespace

DenseZ dense_of(const ZPoly& f) {
  DenseZ a(f.n + 1);
  a[f.n] = 1;
  for (int i = 1; i <= f.n; ++i) a[f.n - i] = f.f(i);
  return a;
}

mpz_class resultant_subres(DenseZ a, DenseZ b) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  mpz_class ca = content(a), cb = content(b);
  for (auto& c : a) c /= ca;
  for (auto& c : b) c /= cb;
  mpz_class g = 1, h = 1, t = zpow(ca, deg(b)) * zpow(cb, deg(a));
  int s = 1;
  if (deg(a) < deg(b)) {
    std::swap(a, b);
    if (deg(a) % 2 == 1 && deg(b) % 2 == 1) s = -1;
  }
  while (true) {
    if (deg(b) == 0) break;
    int delta = deg(a) - deg(b);
    if (deg(a) % 2 == 1 && deg(b) % 2 == 1) s = -s;
    DenseZ r = prem(a, b);
    if (r.empty()) return 0;
    a = std::move(b);
    mpz_class div = g * zpow(h, delta);
    for (auto& c : r) c /= div;
    b = std::move(r);
    g = a.back();
    // h <- h^(1-delta) g^delta, exact
    if (delta == 0) {
      // h unchanged
    } else {
      h = zpow(g, delta) / zpow(h, delta - 1);
    }
  }
  // b is a nonzero constant
  int da = deg(a);
  mpz_class hh = zpow(b.back(), da);
  if (da >= 1) hh /= zpow(h, da - 1);
  else hh *= h;
  return s * t * hh;
}

mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m[k][k]) == 0) {
      size_t piv = k + 1;
      while (piv < n && sgn(m[piv][k]) == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpq_class det_gauss(std::vector<std::vector<mpq_class>> m) {
  const size_t n = m.size();
  mpq_class d = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && sgn(m[piv][k]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[k], m[piv]);
      d = -d;
    }
    d *= m[k][k];
    for (size_t i = k + 1; i < n; ++i) {
      if (sgn(m[i][k]) == 0) continue;
      mpq_class fct = m[i][k] / m[k][k];
      for (size_t j = k; j < n; ++j) m[i][j] -= fct * m[k][j];
    }
  }
  return d;
}

mpz_class resultant_sylvester(const DenseZ& a, const DenseZ& b) {
  const int da = deg(a), db = deg(b);
  const int sz = da + db;
  std::vector<std::vector<mpz_class>> m(sz, std::vector<mpz_class>(sz));
  for (int r = 0; r < db; ++r)
    for (int i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
  for (int r = 0; r < da; ++r)
    for (int i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];
  return det_bareiss(m);
}

namespace {
DenseZ derivative(const DenseZ& a) {
  DenseZ d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
  return d;
}
int disc_sign(int n) { return (n * (n - 1) / 2) % 2 == 0 ? 1 : -1; }
}  // namespace

mpz_class poly_disc(const ZPoly& f) {
  DenseZ a = dense_of(f);
  return disc_sign(f.n) * resultant_subres(a, derivative(a));
}

mpz_class poly_disc_sylvester(const ZPoly& f) {
  DenseZ a = dense_of(f);
  return disc_sign(f.n) * resultant_sylvester(a, derivative(a));
}

mpq_class poly_disc(const QPoly& f) {
  mpz_class L = 1;
  for (const auto& c : f.c) L = lcm(L, c.get_den());
  DenseZ a(f.n + 1);
  a[f.n] = L;
  for (int i = 1; i <= f.n; ++i) {
    mpq_class v = f.f(i) * L;
    a[f.n - i] = v.get_num();
  }
  mpq_class r(disc_sign(f.n) * resultant_subres(a, derivative(a)));
  r /= mpq_class(zpow(L, 2 * f.n - 1));
  return r;
}

Zm poly_disc(const MonicPoly<Zm>& f) {
  std::vector<mpz_class> c;
  for (const auto& v : f.c) c.emplace_back(static_cast<long>(v.v));
  mpz_class d = poly_disc(ZPoly(c, RingTag::integers()));
  mpz_class r = d % f.ring.m;
  if (r < 0) r += f.ring.m;
  return Zm(r.get_si(), f.ring.m);
}

double poly_disc(const MonicPoly<double>& f) { return poly_disc(to_qpoly(f)).get_d(); }

int sturm_dense(const DenseQ& f0) {
  DenseQ p0 = f0;
  trim(p0);
  DenseQ p1;
  for (size_t i = 1; i < p0.size(); ++i) p1.push_back(p0[i] * static_cast<long>(i));
  std::vector<DenseQ> seq{p0, p1};
  while (seq.back().size() > 1) {
    DenseQ a = seq[seq.size() - 2];
    const DenseQ& b = seq.back();
    while (a.size() >= b.size()) {
      mpq_class q = a.back() / b.back();
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
      a.pop_back();
      trim(a);
    }
    if (a.empty()) break;
    for (auto& c : a) c = -c;
    seq.push_back(a);
  }
  auto changes = [&](bool minus_inf) {
    int cnt = 0, last = 0;
    for (const auto& p : seq) {
      if (p.empty()) continue;
      int s = sgn(p.back());
      if (minus_inf && (p.size() - 1) % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++cnt;
      last = s;
    }
    return cnt;
  };
  return changes(true) - changes(false);
}

int sturm_real_roots(const QPoly& f) {
  if (poly_disc(f) == 0) throw DegenerateInput("sturm_real_roots: zero discriminant");
  DenseQ a(f.n + 1);
  a[f.n] = 1;
  for (int i = 1; i <= f.n; ++i) a[f.n - i] = f.f(i);
  return sturm_dense(a);
}

int sturm_real_roots(const ZPoly& f) { return sturm_real_roots(to_qpoly(f)); }
int sturm_real_roots(const MonicPoly<double>& f) { return sturm_real_roots(to_qpoly(f)); }

int padic_val(const mpz_class& x, long p) {
  if (sgn(x) == 0) return kPadicInfinity;
  mpz_class t = x;
  int v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
    t /= p;
    ++v;
  }
  return v;
}

int padic_val(const mpq_class& x, long p) {
  if (sgn(x) == 0) return kPadicInfinity;
  return padic_val(mpz_class(x.get_num()), p) - padic_val(mpz_class(x.get_den()), p);
}

int padic_val(int64_t x, long p) {
  if (x == 0) return kPadicInfinity;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace redorb
