#pragma once

#include <climits>
#include <vector>

#include "redorb/ring.hpp"

namespace redorb {

// f(x) = x^n + c[0] x^{n-1} + ... + c[n-1]
template <class T>
struct MonicPoly {
  int n = 0;
  std::vector<T> c;
  RingTag ring;

  MonicPoly() = default;
  MonicPoly(std::vector<T> coeffs, RingTag r) : n(static_cast<int>(coeffs.size())), c(std::move(coeffs)), ring(r) {}

  const T& f(int i) const { return c[i - 1]; }  // 1-based f_i
  T& f(int i) { return c[i - 1]; }
  bool operator==(const MonicPoly& o) const { return n == o.n && c == o.c; }
};

using ZPoly = MonicPoly<mpz_class>;
using QPoly = MonicPoly<mpq_class>;

ZPoly zpoly_of(const std::vector<long>& coeffs);
QPoly qpoly_of(const std::vector<long>& coeffs);

// dense integer polynomials, index = degree
using DenseZ = std::vector<mpz_class>;
using DenseQ = std::vector<mpq_class>;

DenseZ dense_of(const ZPoly& f);
mpz_class resultant_subres(DenseZ a, DenseZ b);
mpz_class resultant_sylvester(const DenseZ& a, const DenseZ& b);
mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m);
mpq_class det_gauss(std::vector<std::vector<mpq_class>> m);

mpz_class poly_disc(const ZPoly& f);
mpq_class poly_disc(const QPoly& f);
Zm poly_disc(const MonicPoly<Zm>& f);
double poly_disc(const MonicPoly<double>& f);  // exact dyadic, rounded at the end
mpz_class poly_disc_sylvester(const ZPoly& f);

int sturm_real_roots(const QPoly& f);
int sturm_real_roots(const ZPoly& f);
int sturm_real_roots(const MonicPoly<double>& f);
int sturm_dense(const DenseQ& f);  // any degree, leading coeff nonzero, squarefree

constexpr int kPadicInfinity = INT_MAX;
int padic_val(const mpz_class& x, long p);
int padic_val(const mpq_class& x, long p);
int padic_val(int64_t x, long p);

template <class T>
MonicPoly<mpq_class> to_qpoly(const MonicPoly<T>& f) {
  std::vector<mpq_class> c;
  for (const auto& v : f.c) c.push_back(to_mpq(v));
  return {c, RingTag::rationals()};
}

}  // namespace redorb
