#include "redorb/repcore.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <random>

namespace redorb {

std::vector<std::pair<int, int>> w0_coords(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      if (i + j >= n) out.emplace_back(i, j);
  return out;
}

int dim_w0(int n) { return static_cast<int>(w0_coords(n).size()); }

namespace {

// coefficients c_0..c_n of the polynomial taking values ys at x = 0..n
std::vector<mpq_class> interpolate(const std::vector<mpq_class>& ys) {
  const int m = static_cast<int>(ys.size());
  std::vector<mpq_class> dd = ys;
  for (int k = 1; k < m; ++k)
    for (int i = m - 1; i >= k; --i) dd[i] = (dd[i] - dd[i - 1]) / k;
  // Newton form sum dd[k] prod_{j<k} (x - j), expanded from the top
  std::vector<mpq_class> c(m, 0);
  for (int k = m - 1; k >= 0; --k) {
    // c <- c * (x - k) + dd[k]
    for (int i = m - 1; i >= 1; --i) c[i] = c[i - 1] - c[i] * k;
    c[0] = -c[0] * k;
    c[0] += dd[k];
  }
  return c;
}

// f_1..f_n of inv for a rational matrix
std::vector<mpq_class> inv_rational(const Mat<mpq_class>& B) {
  const int n = B.n;
  bool integral = true;
  for (const auto& v : B.a)
    if (v.get_den() != 1) integral = false;
  std::vector<mpq_class> ys;
  for (int x = 0; x <= n; ++x) {
    if (integral) {
      std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = B(i, j).get_num() + (i + j == n - 1 ? x : 0);
      ys.emplace_back(det_bareiss(std::move(m)));
    } else {
      std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = B(i, j) + (i + j == n - 1 ? x : 0);
      ys.push_back(det_gauss(std::move(m)));
    }
  }
  if ((n / 2) % 2 == 1)
    for (auto& y : ys) y = -y;
  auto c = interpolate(ys);
  assert(c[n] == 1 && "inv must be monic");
  if (c[n] != 1) throw Error("inv: leading coefficient is not 1");
  std::vector<mpq_class> f(n);
  for (int i = 1; i <= n; ++i) f[i - 1] = c[n - i];
  return f;
}

template <class T>
Mat<mpq_class> lift_q(const Mat<T>& m) {
  Mat<mpq_class> r;
  r.n = m.n;
  for (const auto& v : m.a) r.a.push_back(to_mpq(v));
  return r;
}

}  // namespace

template <>
MonicPoly<mpq_class> inv(const SymMatrix<mpq_class>& B) {
  return {inv_rational(B.m), B.ring};
}

template <>
MonicPoly<mpz_class> inv(const SymMatrix<mpz_class>& B) {
  auto f = inv_rational(lift_q(B.m));
  std::vector<mpz_class> c;
  for (auto& v : f) c.push_back(v.get_num());
  return {c, B.ring};
}

template <>
MonicPoly<Zm> inv(const SymMatrix<Zm>& B) {
  auto f = inv_rational(lift_q(B.m));
  std::vector<Zm> c;
  for (auto& v : f) {
    mpz_class r = v.get_num() % B.ring.m;
    if (r < 0) r += B.ring.m;
    c.emplace_back(r.get_si(), B.ring.m);
  }
  return {c, B.ring};
}

template <>
MonicPoly<double> inv(const SymMatrix<double>& B) {
  auto f = inv_rational(lift_q(B.m));
  std::vector<double> c;
  for (auto& v : f) c.push_back(v.get_d());
  return {c, B.ring};
}

namespace {

constexpr int kMaxFastN = 10;

struct VandermondeCache {
  // scaled inverse Vandermonde for nodes 0..n: c_j = sum_x q[j][x] * y_x / den
  std::array<std::vector<std::vector<__int128>>, kMaxFastN + 1> q;
  std::array<__int128, kMaxFastN + 1> den{};

  VandermondeCache() {
    for (int n = 1; n <= kMaxFastN; ++n) {
      std::vector<std::vector<mpq_class>> cols;
      for (int x = 0; x <= n; ++x) {
        std::vector<mpq_class> ys(n + 1, 0);
        ys[x] = 1;
        cols.push_back(interpolate(ys));
      }
      mpz_class L = 1;
      for (auto& col : cols)
        for (auto& v : col) L = lcm(L, v.get_den());
      den[n] = static_cast<__int128>(L.get_si());
      q[n].assign(n + 1, std::vector<__int128>(n + 1));
      for (int x = 0; x <= n; ++x)
        for (int j = 0; j <= n; ++j) {
          mpq_class v = cols[x][j] * L;
          q[n][j][x] = static_cast<__int128>(v.get_num().get_si());
        }
    }
  }
};

const VandermondeCache& vcache() {
  static const VandermondeCache c;
  return c;
}

__int128 det_i128(__int128* m, int n) {
  int sign = 1;
  __int128 prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      int piv = k + 1;
      while (piv < n && m[piv * n + k] == 0) ++piv;
      if (piv == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
    prev = m[k * n + k];
  }
  return sign * m[(n - 1) * n + (n - 1)];
}

}  // namespace

void inv_i64(const int64_t* B, int n, int64_t* out) {
  if (n > kMaxFastN) throw Error("inv_i64: n too large");
  const auto& vc = vcache();
  __int128 ys[kMaxFastN + 1];
  __int128 m[kMaxFastN * kMaxFastN];
  for (int x = 0; x <= n; ++x) {
    for (int i = 0; i < n * n; ++i) m[i] = B[i];
    for (int i = 0; i < n; ++i) m[i * n + (n - 1 - i)] += x;
    ys[x] = det_i128(m, n);
    if ((n / 2) % 2 == 1) ys[x] = -ys[x];
  }
  for (int i = 1; i <= n; ++i) {
    int j = n - i;
    __int128 s = 0;
    for (int x = 0; x <= n; ++x) s += vc.q[n][j][x] * ys[x];
    out[i - 1] = static_cast<int64_t>(s / vc.den[n]);
  }
}

double height(const QPoly& f) {
  double h = 0;
  for (int i = 1; i <= f.n; ++i) {
    double a = std::fabs(f.f(i).get_d());
    if (a > 0) h = std::max(h, std::pow(a, 1.0 / i));
  }
  return h;
}
double height(const ZPoly& f) { return height(to_qpoly(f)); }
double height(const MonicPoly<double>& f) {
  double h = 0;
  for (int i = 1; i <= f.n; ++i) {
    double a = std::fabs(f.f(i));
    if (a > 0) h = std::max(h, std::pow(a, 1.0 / i));
  }
  return h;
}

bool height_below(const ZPoly& f, long X) {
  mpz_class bound = 1;
  for (int i = 1; i <= f.n; ++i) {
    bound *= X;
    if (abs(f.f(i)) >= bound) return false;
  }
  return true;
}

int num_slice(int n) { return n / 2; }

std::vector<int> lambda_exponents(int n) {
  std::vector<int> e;
  if (n % 2 == 1) {
    for (int i = 1; i <= n / 2; ++i) e.push_back(2 * i - 1);
  } else {
    for (int i = 1; i <= (n - 2) / 2; ++i) e.push_back(2 * i - 1);
    e.push_back((n - 2) / 2);
  }
  return e;
}

std::vector<int> zpoly_exponents(int n) {
  std::vector<int> e;
  if (n % 2 == 1) {
    for (int k = 1; k <= n / 2; ++k) e.push_back(2 * k);
  } else {
    const int g = (n - 2) / 2;
    for (int k = 1; k <= g; ++k) e.push_back(2 * k);
    e.push_back(g + 1);
  }
  return e;
}

namespace {
template <class T>
T power(const T& b, int e) {
  T r = cst(b, 1);
  for (int i = 0; i < e; ++i) r = r * b;
  return r;
}
}  // namespace

template <class T>
T lambda(const SymMatrix<T>& B) {
  auto s = slice_entries(B);
  auto e = lambda_exponents(B.n);
  T r = cst(B.m.a[0], 1);
  for (size_t i = 0; i < s.size(); ++i) r = r * power(s[i], e[i]);
  return r;
}

template <class T>
T zpoly(int n, const std::vector<T>& b) {
  auto e = zpoly_exponents(n);
  if (b.size() != e.size()) throw LengthMismatch("zpoly: expected " + std::to_string(e.size()) + " slice entries");
  T r = cst(b[0], 1);
  for (size_t i = 0; i < b.size(); ++i) r = r * power(b[i], e[i]);
  return r;
}

std::vector<std::pair<int, int>> sigma0_positions(int n) {
  std::vector<std::pair<int, int>> pos;
  if (n % 2 == 1) {
    const int c = (n + 1) / 2;
    pos.emplace_back(c, c);
    for (int k = 2; k <= n; ++k) {
      int r = c + (k - 1) / 2;
      if (k % 2 == 0) pos.emplace_back(r, r + 1);
      else pos.emplace_back(r, r);
    }
  } else {
    const int m = n / 2;
    pos.emplace_back(m, m + 1);
    for (int k = 2; k <= n; ++k) {
      if (k % 2 == 0) pos.emplace_back(m + k / 2, m + k / 2);
      else pos.emplace_back(m + (k - 1) / 2, m + (k - 1) / 2 + 1);
    }
  }
  return pos;
}

std::vector<int> sigma0_signs(int n) {
  // output of calibrate_sigma0_signs, re-derived in tests
  static const std::vector<std::vector<int>> table = {
      {},
      {},
      {},
      {1, 1, -1},
      {-1, 1, -1, 1},
      {1, 1, -1, 1, -1},
      {-1, 1, -1, 1, -1, 1},
      {1, 1, -1, 1, -1, 1, -1},
      {-1, 1, -1, 1, -1, 1, -1, 1},
  };
  if (n >= 3 && n < static_cast<int>(table.size()) && !table[n].empty()) return table[n];
  return calibrate_sigma0_signs(n);
}

template <class T>
SymMatrix<T> sigma0_with_signs(const MonicPoly<T>& f, const std::vector<int>& eps) {
  const int n = f.n;
  SymMatrix<T> B(n, f.ring);
  const T one = cst(B.m.a[0], 1);
  for (int i = 1; i <= n - 1; ++i) B.set(i, n - i, one);
  auto pos = sigma0_positions(n);
  auto sgnd = [&](int k, const T& v) -> T {
    if (eps[k - 1] > 0) return v;
    T r = -v;
    return r;
  };
  for (int k = 1; k <= n; ++k) {
    T val;
    const T& fk = f.f(k);
    if (n % 2 == 1) {
      if (k == 1) val = fk;
      else if (k % 2 == 0) val = -half_or_throw(fk);
      else val = -fk;
    } else {
      if (k == 1) val = -half_or_throw(fk);
      else if (k == 2) {
        T h = half_or_throw(f.f(1));
        val = h * h - fk;
      } else if (k % 2 == 1) val = -half_or_throw(fk);
      else val = -fk;
    }
    B.set(pos[k - 1].first, pos[k - 1].second, sgnd(k, val));
  }
  return B;
}

template <class T>
SymMatrix<T> sigma0(const MonicPoly<T>& f) {
  if (f.n < 3) throw Error("sigma0 needs n >= 3");
  return sigma0_with_signs(f, sigma0_signs(f.n));
}

std::vector<int> calibrate_sigma0_signs(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> coef(-9, 9), den(1, 5);
  std::vector<QPoly> samples;
  for (int t = 0; t < 4; ++t) {
    std::vector<mpq_class> c;
    for (int i = 0; i < n; ++i) {
      mpq_class q(coef(rng), den(rng));
      q.canonicalize();
      c.push_back(q);
    }
    samples.emplace_back(c, RingTag::rationals());
  }
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> eps(n);
    for (int k = 0; k < n; ++k) eps[k] = (mask >> k) & 1 ? -1 : 1;
    bool ok = true;
    for (const auto& f : samples) {
      if (inv(sigma0_with_signs(f, eps)) != f) {
        ok = false;
        break;
      }
    }
    if (ok) return eps;
  }
  return {};
}

SymMatrix<double> sigma(const MonicPoly<double>& f) {
  const double H = height(f);
  if (H == 0) throw DegenerateInput("sigma: f = x^n is degenerate");
  std::vector<double> c(f.n);
  double hp = 1;
  for (int i = 1; i <= f.n; ++i) {
    hp *= H;
    c[i - 1] = f.f(i) / hp;
  }
  auto B = sigma0(MonicPoly<double>(c, f.ring));
  for (auto& v : B.m.a) v *= H;
  return B;
}

Stratum stratify(const ZPoly& f) {
  if (poly_disc(f) == 0) throw DegenerateInput("stratify: zero discriminant");
  return {f.n, sturm_real_roots(f)};
}

Stratum stratify(const MonicPoly<double>& f) {
  auto q = to_qpoly(f);
  if (poly_disc(q) == 0) throw DegenerateInput("stratify: zero discriminant");
  return {f.n, sturm_real_roots(q)};
}

bool in_U_r(const ZPoly& f, int r) {
  if (poly_disc(f) == 0) return false;
  return sturm_real_roots(f) == r;
}

#define REDORB_INST(T)                                                                \
  template T lambda(const SymMatrix<T>&);                                             \
  template T zpoly(int, const std::vector<T>&);                                       \
  template SymMatrix<T> sigma0(const MonicPoly<T>&);                                  \
  template SymMatrix<T> sigma0_with_signs(const MonicPoly<T>&, const std::vector<int>&);

REDORB_INST(mpz_class)
REDORB_INST(mpq_class)
REDORB_INST(double)
REDORB_INST(Zm)
#undef REDORB_INST

}  // namespace redorb
