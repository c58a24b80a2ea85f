// brute-force reference computations used only by the tests
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// determinant by plain Gaussian elimination over Q
inline mpq_class det(std::vector<std::vector<mpq_class>> m) {
  const size_t n = m.size();
  mpq_class d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      mpq_class k = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
    }
  }
  return d;
}

// coefficients low degree first
inline mpq_class sylvester_resultant(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  const size_t da = a.size() - 1, db = b.size() - 1, N = da + db;
  std::vector<std::vector<mpq_class>> S(N, std::vector<mpq_class>(N, 0));
  for (size_t i = 0; i < db; ++i)
    for (size_t j = 0; j <= da; ++j) S[i][i + j] = a[da - j];
  for (size_t i = 0; i < da; ++i)
    for (size_t j = 0; j <= db; ++j) S[db + i][i + j] = b[db - j];
  return det(S);
}

// disc of x^n + c1 x^{n-1} + ... + cn as (-1)^{n(n-1)/2} Res(f, f')
inline mpq_class disc_monic(const std::vector<long>& c) {
  const size_t n = c.size();
  std::vector<mpq_class> f(n + 1), d(n);
  f[n] = 1;
  for (size_t i = 0; i < n; ++i) f[n - 1 - i] = c[i];
  for (size_t k = 1; k <= n; ++k) d[k - 1] = f[k] * static_cast<long>(k);
  mpq_class r = sylvester_resultant(f, d);
  return (n * (n - 1) / 2) % 2 ? -r : r;
}

// real roots of a real polynomial (low degree first) located between critical points
inline std::vector<double> real_roots(std::vector<double> f) {
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  const size_t deg = f.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-f[0] / f[1]};
  std::vector<double> d(deg);
  for (size_t k = 1; k <= deg; ++k) d[k - 1] = f[k] * static_cast<double>(k);
  auto crit = real_roots(d);
  std::sort(crit.begin(), crit.end());
  auto ev = [&](double x) {
    long double s = 0;
    for (size_t k = f.size(); k-- > 0;) s = s * x + f[k];
    return static_cast<double>(s);
  };
  double bound = 1;
  for (size_t k = 0; k < deg; ++k) bound = std::max(bound, 1 + std::fabs(f[k] / f[deg]));
  std::vector<double> pts{-bound};
  for (double c : crit) pts.push_back(c);
  pts.push_back(bound);
  std::vector<double> roots;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    double flo = ev(lo), fhi = ev(hi);
    if (flo == 0) {
      roots.push_back(lo);
      continue;
    }
    if ((flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      double mid = (lo + hi) / 2;
      if ((ev(mid) < 0) == (flo < 0))
        lo = mid;
      else
        hi = mid;
    }
    roots.push_back((lo + hi) / 2);
  }
  return roots;
}

// number of real roots of x^n + c1 x^{n-1} + ...
inline int count_real_roots(const std::vector<long>& c) {
  std::vector<double> f(c.size() + 1);
  f[c.size()] = 1;
  for (size_t i = 0; i < c.size(); ++i) f[c.size() - 1 - i] = static_cast<double>(c[i]);
  auto r = real_roots(f);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(), [](double a, double b) { return std::fabs(a - b) < 1e-12; }), r.end());
  return static_cast<int>(r.size());
}

// (-1)^{floor(n/2)} det(xA + B) by evaluation at x = 0..n and Lagrange interpolation; returns f_1..f_n
inline std::vector<mpq_class> inv_interp(const std::vector<std::vector<mpq_class>>& B) {
  const int n = static_cast<int>(B.size());
  std::vector<mpq_class> vals(n + 1);
  for (int x = 0; x <= n; ++x) {
    auto M = B;
    for (int i = 0; i < n; ++i) M[i][n - 1 - i] += x;
    vals[x] = det(M);
  }
  // Newton forward differences -> monomial coefficients
  std::vector<mpq_class> coeff(n + 1, 0);  // low degree first
  for (int i = 0; i <= n; ++i) {
    // Lagrange basis polynomial for node i
    std::vector<mpq_class> basis{1};
    mpq_class den = 1;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      std::vector<mpq_class> nb(basis.size() + 1, 0);
      for (size_t k = 0; k < basis.size(); ++k) {
        nb[k + 1] += basis[k];
        nb[k] -= basis[k] * j;
      }
      basis = nb;
      den *= i - j;
    }
    for (int k = 0; k <= n; ++k) coeff[k] += vals[i] * basis[k] / den;
  }
  const mpq_class sign = (n / 2) % 2 ? -1 : 1;
  std::vector<mpq_class> f(n);
  for (int i = 1; i <= n; ++i) f[i - 1] = sign * coeff[n - i];
  return f;
}

inline int64_t mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

// all symmetric B over Z/q in W0 (b_ij = 0 for i + j < n, 1-based) with inv(B) = f mod q, via inv_fn
inline int64_t brute_fiber_count(int n, int64_t q, const std::vector<int64_t>& f,
                                 const std::function<std::vector<int64_t>(const std::vector<int64_t>&)>& inv_fn) {
  std::vector<std::pair<int, int>> coords;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      if (i + j >= n) coords.emplace_back(i, j);
  std::vector<int64_t> digit(coords.size(), 0);
  int64_t count = 0;
  while (true) {
    std::vector<int64_t> B(n * n, 0);
    for (size_t k = 0; k < coords.size(); ++k) {
      B[(coords[k].first - 1) * n + coords[k].second - 1] = digit[k];
      B[(coords[k].second - 1) * n + coords[k].first - 1] = digit[k];
    }
    auto g = inv_fn(B);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = mod(g[i] - f[i], q) == 0;
    if (ok) ++count;
    size_t t = 0;
    while (t < digit.size() && ++digit[t] == q) digit[t++] = 0;
    if (t == digit.size()) break;
  }
  return count;
}

}  // namespace oracle
