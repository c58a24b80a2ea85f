#include "redorb/group.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace redorb {

namespace {

mpq_class scale_for(const mpq_class& x) { return 1 / x; }
double scale_for(const double& x) { return 1.0 / x; }
mpz_class scale_for(const mpz_class& x) { return sgn(x) < 0 ? mpz_class(-1) : mpz_class(1); }
Zm scale_for(const Zm& x) {
  Zm c;
  if (try_inv(x, c)) return c;
  return Zm(2 * x.v > x.m ? -1 : 1, x.m);
}

template <class T>
void normalize(GroupElem<T>& e) {
  if (e.n % 2 == 1) return;
  for (const auto& v : e.g.a) {
    if (is_zero(v)) continue;
    T c = scale_for(v);
    if (c == cst(v, 1)) return;
    for (auto& w : e.g.a) w = w * c;
    e.mult = e.mult * c * c;
    return;
  }
}

template <class T>
bool lower_triangular(const Mat<T>& g) {
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (!is_zero(g(i, j))) return false;
  return true;
}

template <class T>
T det_elem(const Mat<T>& g) {
  std::vector<std::vector<mpq_class>> m(g.n, std::vector<mpq_class>(g.n));
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) m[i][j] = to_mpq(g(i, j));
  mpq_class d = det_gauss(std::move(m));
  if constexpr (std::is_same_v<T, Zm>) {
    mpz_class r = d.get_num() % g.a[0].m;
    if (r < 0) r += g.a[0].m;
    return Zm(r.get_si(), g.a[0].m);
  } else if constexpr (std::is_same_v<T, mpz_class>) {
    return d.get_num();
  } else if constexpr (std::is_same_v<T, double>) {
    return d.get_d();
  } else {
    return d;
  }
}

bool close(const double& a, const double& b) { return std::fabs(a - b) <= 1e-9 * (1 + std::fabs(a) + std::fabs(b)); }
template <class T>
bool same(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, double>) return close(a, b);
  else return a == b;
}

}  // namespace

template <class T>
bool is_member(const Mat<T>& g, const T& mult) {
  const int n = g.n;
  const T zero = cst(g.a[0], 0);
  Mat<T> A = Mat<T>::antidiag(n, zero);
  Mat<T> lhs = g * A * g.transpose();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T want = (i + j == n - 1) ? mult : zero;
      if (!same(lhs(i, j), want)) return false;
    }
  if (n % 2 == 1) {
    if (!same(mult, cst(zero, 1))) return false;
    if (!same(det_elem(g), cst(zero, 1))) return false;
  }
  T inv_mult;
  return try_inv(mult, inv_mult);
}

template <class T>
GroupElem<T> make_elem(Mat<T> g, T mult, RingTag ring) {
  if (!is_member(g, mult)) throw Error("make_elem: matrix is not in the group");
  GroupElem<T> e{g.n, ring, std::move(g), std::move(mult), false};
  normalize(e);
  e.parabolic = lower_triangular(e.g);
  return e;
}

template <class T>
GroupElem<T> identity_elem(int n, RingTag ring) {
  T z = ring_zero<T>(ring);
  return GroupElem<T>{n, ring, Mat<T>::identity(n, z), cst(z, 1), true};
}

template <class T>
GroupElem<T> compose(const GroupElem<T>& a, const GroupElem<T>& b) {
  GroupElem<T> e{a.n, a.ring, a.g * b.g, a.mult * b.mult, a.parabolic && b.parabolic};
  normalize(e);
  if (!(a.parabolic && b.parabolic)) e.parabolic = lower_triangular(e.g);
  return e;
}

template <class T>
GroupElem<T> inverse(const GroupElem<T>& a) {
  // g^{-1} = mult^{-1} A g^t A
  const int n = a.n;
  T mi = inv_or_throw(a.mult);
  Mat<T> r(n, cst(a.mult, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a.g(n - 1 - j, n - 1 - i) * mi;
  GroupElem<T> e{n, a.ring, std::move(r), mi, a.parabolic};
  normalize(e);
  return e;
}

template <class T>
SymMatrix<T> act(const GroupElem<T>& g, const SymMatrix<T>& B) {
  Mat<T> r = g.g * B.m * g.g.transpose();
  if (!(g.mult == cst(g.mult, 1))) {
    T mi = inv_or_throw(g.mult);
    for (auto& v : r.a) v = v * mi;
  }
  return SymMatrix<T>(std::move(r), B.ring);
}

std::vector<std::pair<int, int>> unipotent_indices(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 2; i <= n - 1; ++i)
    for (int j = 1; j <= std::min(i - 1, n - i); ++j) out.emplace_back(i, j);
  return out;
}

bool is_middle_row(int n, int i) { return n % 2 == 1 && i == (n + 1) / 2; }

namespace {
mpz_class half_square(const mpz_class& v) {
  mpz_class sq = v * v, h;
  if (!try_half(sq, h)) throw HalvingError("unipotent_gen: middle-row parameter must be even over Z");
  if (mpz_odd_p(v.get_mpz_t())) throw HalvingError("unipotent_gen: middle-row parameter must be even over Z");
  return h;
}
mpq_class half_square(const mpq_class& v) { return v * v / 2; }
double half_square(const double& v) { return v * v / 2; }
Zm half_square(const Zm& v) {
  if (v.m % 2 == 1) return half_or_throw(v * v);
  if (v.v % 2 != 0) throw HalvingError("unipotent_gen: middle-row parameter must be even in Z/2^k");
  __int128 s = static_cast<__int128>(v.v) * v.v / 2;
  return Zm(static_cast<int64_t>(s % v.m), v.m);
}
}  // namespace

template <class T>
GroupElem<T> unipotent_gen(int n, int i, int j, const T& v, RingTag ring) {
  if (i < 2 || i > n - 1 || j < 1 || j > std::min(i - 1, n - i))
    throw IndexError("unipotent_gen: (" + std::to_string(i) + "," + std::to_string(j) + ") is not a root position");
  T z = cst(v, 0);
  Mat<T> g = Mat<T>::identity(n, z);
  g(i - 1, j - 1) = g(i - 1, j - 1) + v;
  g(n - j, n - i) = g(n - j, n - i) - v;
  if (is_middle_row(n, i)) g(n - j, j - 1) = g(n - j, j - 1) - half_square(v);
  return make_elem(std::move(g), cst(z, 1), ring);
}

template <class T>
GroupElem<T> torus_elem(int n, const std::vector<T>& s, RingTag ring) {
  const int h = n / 2;
  if (static_cast<int>(s.size()) != h) throw LengthMismatch("torus_elem: need floor(n/2) coordinates");
  T z = cst(s[0], 0), one = cst(z, 1);
  std::vector<T> sinv;
  for (const auto& x : s) sinv.push_back(inv_or_throw(x));
  Mat<T> g(n, z);
  T mult = one;
  if (n % 2 == 1) {
    for (int k = 1; k <= h; ++k) {
      T t = one;
      for (int i = k; i <= h; ++i) t = t * sinv[i - 1];
      g(k - 1, k - 1) = t;
      g(n - k, n - k) = inv_or_throw(t);
    }
    g(h, h) = one;
  } else {
    // similitude form: g_k = frak_s * t_k, mult = frak_s^2 = s_{h-1} s_h
    const int m = h;
    mult = s[m - 2] * s[m - 1];
    std::vector<T> gk(m + 1, one);
    for (int k = 1; k <= m - 2; ++k) {
      T t = one;
      for (int i = k; i <= m - 2; ++i) t = t * sinv[i - 1];
      gk[k] = t;
    }
    gk[m - 1] = one;
    gk[m] = s[m - 2];
    for (int k = 1; k <= m; ++k) {
      g(k - 1, k - 1) = gk[k];
      g(n - k, n - k) = mult * inv_or_throw(gk[k]);
    }
  }
  return make_elem(std::move(g), mult, ring);
}

std::vector<double> torus_diag(int n, const std::vector<double>& s) {
  const int h = n / 2;
  std::vector<double> t(n, 1.0);
  if (n % 2 == 1) {
    for (int k = 1; k <= h; ++k) {
      double v = 1;
      for (int i = k; i <= h; ++i) v /= s[i - 1];
      t[k - 1] = v;
      t[n - k] = 1 / v;
    }
  } else {
    const int m = h;
    double fs = std::sqrt(s[m - 2] * s[m - 1]);
    for (int k = 1; k <= m - 2; ++k) {
      double v = 1 / fs;
      for (int i = k; i <= m - 2; ++i) v /= s[i - 1];
      t[k - 1] = v;
    }
    t[m - 2] = 1 / fs;
    t[m - 1] = s[m - 2] / fs;
    for (int k = 1; k <= m; ++k) t[n - k] = 1 / t[k - 1];
  }
  return t;
}

namespace {
template <class T>
T delta_impl(int n, const std::vector<T>& s) {
  const int h = n / 2;
  T r = cst(s[0], 1);
  auto pw = [](const T& b, int e) {
    T x = cst(b, 1);
    T base = e >= 0 ? b : cst(b, 1) / b;
    for (int i = 0; i < std::abs(e); ++i) x = x * base;
    return x;
  };
  if (n % 2 == 1) {
    for (int i = 1; i <= h; ++i) r = r * pw(s[i - 1], i * i - 2 * i * h);
  } else {
    const int m = h;
    r = pw(s[m - 2] * s[m - 1], -(n * n - 2 * n) / 8);
    for (int i = 1; i <= (n - 4) / 2; ++i) r = r * pw(s[i - 1], i * i - i * (n - 1));
  }
  return r;
}
}  // namespace

mpq_class haar_delta(int n, const std::vector<mpq_class>& s) { return delta_impl(n, s); }
double haar_delta(int n, const std::vector<double>& s) { return delta_impl(n, s); }

std::vector<GroupElem<mpz_class>> gamma_group_raw(int n) {
  const int free = (n + 1) / 2;
  std::vector<GroupElem<mpz_class>> out;
  for (int mask = 0; mask < (1 << free); ++mask) {
    Mat<mpz_class> g(n, mpz_class(0));
    for (int k = 1; k <= free; ++k) {
      int s = (mask >> (k - 1)) & 1 ? -1 : 1;
      g(k - 1, k - 1) = s;
      g(n - k, n - k) = s;
    }
    GroupElem<mpz_class> e{n, RingTag::integers(), g, mpz_class(1), true};
    out.push_back(e);
  }
  return out;
}

std::vector<GroupElem<mpz_class>> gamma_group(int n) {
  std::vector<GroupElem<mpz_class>> out;
  for (auto& e : gamma_group_raw(n)) {
    if (n % 2 == 1) {
      if (e.g(n / 2, n / 2) != 1) continue;
      out.push_back(e);
    } else {
      if (e.g(0, 0) != 1) continue;  // one representative per +-1 class
      out.push_back(e);
    }
  }
  return out;
}

std::vector<GroupElem<mpz_class>> gamma_negative(int n) {
  std::vector<GroupElem<mpz_class>> out;
  if (n % 2 == 1) return out;
  const int m = n / 2;
  for (int mask = 0; mask < (1 << m); ++mask) {
    Mat<mpz_class> g(n, mpz_class(0));
    for (int k = 1; k <= m; ++k) {
      int s = (mask >> (k - 1)) & 1 ? -1 : 1;
      g(k - 1, k - 1) = s;
      g(n - k, n - k) = -s;
    }
    if (g(0, 0) != 1) continue;
    out.push_back(make_elem(g, mpz_class(-1), RingTag::integers()));
  }
  return out;
}

template <class T>
bool is_in_P(const GroupElem<T>& g) {
  return lower_triangular(g.g);
}

namespace {

template <class T>
T random_unit(std::mt19937_64& rng, const RingTag& ring, long bound) {
  std::uniform_int_distribution<long> d(1, std::max(1L, bound));
  std::uniform_int_distribution<int> coin(0, 1);
  if constexpr (std::is_same_v<T, mpq_class>) {
    mpq_class q(d(rng), d(rng));
    q.canonicalize();
    return coin(rng) ? q : mpq_class(-q);
  } else if constexpr (std::is_same_v<T, double>) {
    double v = static_cast<double>(d(rng)) / static_cast<double>(d(rng));
    return coin(rng) ? v : -v;
  } else if constexpr (std::is_same_v<T, mpz_class>) {
    return coin(rng) ? mpz_class(1) : mpz_class(-1);
  } else {
    std::uniform_int_distribution<int64_t> r(1, ring.m - 1);
    while (true) {
      Zm z(r(rng), ring.m);
      Zm i;
      if (ring.m == 1 || try_inv(z, i)) return z;
    }
  }
}

template <class T>
bool ring_has_half(const RingTag& ring) {
  if constexpr (std::is_same_v<T, mpz_class>) return false;
  else if constexpr (std::is_same_v<T, Zm>) return ring.m % 2 == 1;
  else return true;
}

}  // namespace

template <class T>
GroupElem<T> random_P(int n, RingTag ring, long bound, uint64_t seed) {
  std::mt19937_64 rng(seed);
  T z = ring_zero<T>(ring);
  Mat<T> g(n, z);
  T mult = cst(z, 1);
  const int h = n / 2;
  if (n % 2 == 1) {
    for (int k = 1; k <= h; ++k) {
      T t = random_unit<T>(rng, ring, bound);
      g(k - 1, k - 1) = t;
      g(n - k, n - k) = inv_or_throw(t);
    }
    g(h, h) = cst(z, 1);
  } else {
    mult = random_unit<T>(rng, ring, bound);
    for (int k = 1; k <= h; ++k) {
      T t = random_unit<T>(rng, ring, bound);
      g(k - 1, k - 1) = t;
      g(n - k, n - k) = mult * inv_or_throw(t);
    }
  }
  GroupElem<T> e = make_elem(g, mult, ring);
  std::uniform_int_distribution<long> coord(-bound, bound);
  for (auto [i, j] : unipotent_indices(n)) {
    long v = coord(rng);
    if (is_middle_row(n, i) && !ring_has_half<T>(ring)) v *= 2;
    e = compose(e, unipotent_gen(n, i, j, cst(z, v), ring));
  }
  return e;
}

std::vector<GroupElem<Zm>> enumerate_P_fp(int n, int64_t p) {
  RingTag ring = RingTag::mod(p);
  const Zm z(0, p);
  const int h = n / 2;
  std::vector<GroupElem<Zm>> torus;
  const int tparams = h;  // odd: t_1..t_h ; even: g_2..g_m and mult (g_1 = 1)
  std::vector<int64_t> idx(tparams, 1);
  while (true) {
    Mat<Zm> g(n, z);
    Zm mult(1, p);
    if (n % 2 == 1) {
      for (int k = 1; k <= h; ++k) {
        Zm t(idx[k - 1], p);
        g(k - 1, k - 1) = t;
        g(n - k, n - k) = inv_or_throw(t);
      }
      g(h, h) = Zm(1, p);
    } else {
      mult = Zm(idx[0], p);
      for (int k = 1; k <= h; ++k) {
        Zm t(k == 1 ? 1 : idx[k - 1], p);
        g(k - 1, k - 1) = t;
        g(n - k, n - k) = mult * inv_or_throw(t);
      }
    }
    torus.push_back(make_elem(g, mult, ring));
    int pos = 0;
    while (pos < tparams && ++idx[pos] == p) idx[pos++] = 1;
    if (pos == tparams) break;
  }
  auto uidx = unipotent_indices(n);
  std::vector<GroupElem<Zm>> nil{identity_elem<Zm>(n, ring)};
  for (auto [i, j] : uidx) {
    std::vector<GroupElem<Zm>> next;
    std::vector<GroupElem<Zm>> gens;
    for (int64_t v = 0; v < p; ++v) gens.push_back(unipotent_gen(n, i, j, Zm(v, p), ring));
    for (auto& a : nil)
      for (auto& u : gens) next.push_back(compose(a, u));
    nil.swap(next);
  }
  std::vector<GroupElem<Zm>> out;
  out.reserve(torus.size() * nil.size());
  for (auto& t : torus)
    for (auto& u : nil) out.push_back(compose(t, u));
  return out;
}

namespace {
std::vector<int64_t> key_of(const GroupElem<Zm>& e) {
  std::vector<int64_t> k;
  k.reserve(e.g.a.size() + 1);
  for (auto& v : e.g.a) k.push_back(v.v);
  k.push_back(e.mult.v);
  return k;
}

int64_t unit_generator(int64_t p, int k) {
  // primitive root mod p^k for odd p
  const int64_t q = ipow(p, k);
  const int64_t phi = q / p * (p - 1);
  std::vector<int64_t> primes;
  int64_t t = phi;
  for (int64_t d = 2; d * d <= t; ++d)
    if (t % d == 0) {
      primes.push_back(d);
      while (t % d == 0) t /= d;
    }
  if (t > 1) primes.push_back(t);
  auto pw = [&](int64_t b, int64_t e) {
    __int128 r = 1, x = b % q;
    while (e) {
      if (e & 1) r = r * x % q;
      x = x * x % q;
      e >>= 1;
    }
    return static_cast<int64_t>(r);
  };
  for (int64_t g = 2; g < q; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto r : primes)
      if (pw(g, phi / r) == 1) ok = false;
    if (ok) return g;
  }
  return 1;
}
}  // namespace

std::vector<GroupElem<Zm>> P_generators_mod(int n, int64_t p, int k) {
  const int64_t q = ipow(p, k);
  RingTag ring = RingTag::mod(q);
  const Zm z(0, q);
  std::vector<int64_t> unit_gens;
  if (p == 2) {
    if (q > 2) unit_gens.push_back(q - 1);
    if (q > 4) unit_gens.push_back(5);
  } else {
    unit_gens.push_back(unit_generator(p, k));
  }
  std::vector<GroupElem<Zm>> gens;
  const int h = n / 2;
  for (int64_t u : unit_gens) {
    const int slots = n % 2 == 1 ? h : h + 1;
    for (int s = 0; s < slots; ++s) {
      Mat<Zm> g = Mat<Zm>::identity(n, z);
      Zm mult(1, q);
      if (n % 2 == 1) {
        g(s, s) = Zm(u, q);
        g(n - 1 - s, n - 1 - s) = inv_or_throw(Zm(u, q));
      } else if (s < h) {
        g(s, s) = Zm(u, q);
        g(n - 1 - s, n - 1 - s) = inv_or_throw(Zm(u, q));
      } else {
        mult = Zm(u, q);
        for (int i = h; i < n; ++i) g(i, i) = mult;
      }
      gens.push_back(make_elem(g, mult, ring));
    }
  }
  for (auto [i, j] : unipotent_indices(n)) {
    int64_t v = (p == 2 && is_middle_row(n, i)) ? 2 : 1;
    gens.push_back(unipotent_gen(n, i, j, Zm(v, q), ring));
  }
  return gens;
}

std::vector<GroupElem<Zm>> P_image_mod(int n, int64_t p, int k, size_t cap) {
  RingTag ring = RingTag::mod(ipow(p, k));
  const auto gens = P_generators_mod(n, p, k);
  std::set<std::vector<int64_t>> seen;
  std::vector<GroupElem<Zm>> out;
  std::deque<GroupElem<Zm>> work;
  auto id = identity_elem<Zm>(n, ring);
  seen.insert(key_of(id));
  out.push_back(id);
  work.push_back(id);
  while (!work.empty()) {
    auto cur = work.front();
    work.pop_front();
    for (auto& gg : gens) {
      auto nx = compose(cur, gg);
      auto key = key_of(nx);
      if (seen.insert(key).second) {
        out.push_back(nx);
        work.push_back(nx);
        if (out.size() > cap) throw InstanceTooLarge("P_image_mod: group image exceeds cap");
      }
    }
  }
  return out;
}

#define REDORB_INST(T)                                                                 \
  template bool is_member(const Mat<T>&, const T&);                                    \
  template GroupElem<T> make_elem(Mat<T>, T, RingTag);                                 \
  template GroupElem<T> identity_elem(int, RingTag);                                   \
  template GroupElem<T> compose(const GroupElem<T>&, const GroupElem<T>&);             \
  template GroupElem<T> inverse(const GroupElem<T>&);                                  \
  template SymMatrix<T> act(const GroupElem<T>&, const SymMatrix<T>&);                 \
  template GroupElem<T> unipotent_gen(int, int, int, const T&, RingTag);               \
  template GroupElem<T> torus_elem(int, const std::vector<T>&, RingTag);               \
  template bool is_in_P(const GroupElem<T>&);                                          \
  template GroupElem<T> random_P(int, RingTag, long, uint64_t);

REDORB_INST(mpz_class)
REDORB_INST(mpq_class)
REDORB_INST(double)
REDORB_INST(Zm)
#undef REDORB_INST

}  // namespace redorb
