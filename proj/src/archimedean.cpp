#include "redorb/archimedean.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "redorb/errors.hpp"
#include "redorb/local.hpp"
#include "redorb/poly.hpp"
#include "redorb/repcore.hpp"

namespace redorb {

namespace {

std::vector<mpq_class> bernoulli(int m) {
  std::vector<mpq_class> B(m + 1);
  B[0] = 1;
  for (int k = 1; k <= m; ++k) {
    mpq_class s = 0;
    mpz_class binom = 1;  // C(k+1, j)
    for (int j = 0; j < k; ++j) {
      s += binom * B[j];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    B[k] = -s / (k + 1);
  }
  return B;
}

mpq_class inv_pow(int64_t b, int e) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
  return mpq_class(mpz_class(1), d);
}

constexpr int kFixedBits = 160;

mpz_class fixed_one() {
  mpz_class one;
  mpz_ui_pow_ui(one.get_mpz_t(), 2, kFixedBits);
  return one;
}

// sum_{b=1}^{M} b^{-z} as an interval
Interval power_sum(int z, int64_t M) {
  const mpz_class one = fixed_one();
  mpz_class lo = 0, hi = 0, t, d;
  for (int64_t b = 1; b <= M; ++b) {
    mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(z));
    mpz_fdiv_q(t.get_mpz_t(), one.get_mpz_t(), d.get_mpz_t());
    lo += t;
    mpz_cdiv_q(t.get_mpz_t(), one.get_mpz_t(), d.get_mpz_t());
    hi += t;
  }
  Interval r(mpq_class(lo, one), mpq_class(hi, one));
  r.lo.canonicalize();
  r.hi.canonicalize();
  return r;
}

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kShards = 256;
constexpr int kGridBits = 29;

// number of real roots of the sample, or -1 when degenerate
int classify_sample(int n, const std::vector<int64_t>& c) {
  if (n == 3) {
    const __int128 c1 = c[0], c2 = c[1], c3 = c[2];
    const __int128 s = static_cast<__int128>(1) << kGridBits;
    __int128 d = c1 * c1 * c2 * c2 - 4 * c2 * c2 * c2 * s - 4 * c1 * c1 * c1 * c3 - 27 * c3 * c3 * s * s + 18 * c1 * c2 * c3 * s;
    if (d == 0) return -1;
    return d > 0 ? 3 : 1;
  }
  std::vector<mpq_class> q;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, kGridBits);
  for (auto v : c) {
    mpq_class x(mpz_class(static_cast<long>(v)), den);
    x.canonicalize();
    q.push_back(x);
  }
  QPoly f(q, RingTag::rationals());
  if (sgn(poly_disc(f)) == 0) return -1;
  return sturm_real_roots(f);
}

}  // namespace

Interval zeta_interval(int s, int N, int J) {
  if (s < 2) throw Error("zeta_interval: s must be at least 2");
  mpq_class head = 0;
  for (int k = 1; k < N; ++k) head += inv_pow(k, s);
  mpq_class S = head + inv_pow(N, s - 1) / (s - 1) + inv_pow(N, s) / 2;
  const auto B = bernoulli(2 * J + 2);
  auto term = [&](int j) -> mpq_class {
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    mpq_class t = B[2 * j];
    mpz_class fact = 1;
    for (int i = 2; i <= 2 * j; ++i) fact *= i;
    t /= fact;
    for (int i = 0; i <= 2 * j - 2; ++i) t *= s + i;
    return t * inv_pow(N, s + 2 * j - 1);
  };
  for (int j = 1; j <= J; ++j) S += term(j);
  // the remainder has the sign of the first omitted term and is smaller in size
  mpq_class next = term(J + 1);
  Interval r = next >= 0 ? Interval(S, S + next) : Interval(S + next, S);
  return r.rounded();
}

Interval constant_Cfin(int n) {
  Interval r(1);
  for (int a : zeta_exponents(n)) r = r * zeta_interval(a);
  return r;
}

Interval constant_Cfin_euler(int n, int64_t P_max) { return euler_product(n, {}, P_max); }

bool valid_r(int n, int r) { return r >= 0 && r <= n && (n - r) % 2 == 0; }

void require_valid_r(int n, int r) {
  if (!valid_r(n, r))
    throw InvalidParity("r = " + std::to_string(r) + " is not a possible number of real roots for degree " + std::to_string(n));
}

nlohmann::json VolumeEstimate::to_json() const {
  return {{"n", n},
          {"r", r},
          {"estimate_mc", estimate},
          {"half_width_99_mc", half_width},
          {"samples", samples},
          {"hits", hits},
          {"seed", seed}};
}

uint64_t counter_rng(uint64_t seed, uint64_t stream, uint64_t counter) {
  return splitmix(splitmix(seed ^ splitmix(stream + 0x632be59bd9b4e019ULL)) + counter);
}

int default_threads() {
  if (const char* e = std::getenv("REDORB_THREADS")) {
    int t = std::atoi(e);
    if (t > 0) return t;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

VolumeEstimate volume_Vr(int n, int r, int64_t samples, uint64_t seed, int threads) {
  require_valid_r(n, r);
  if (samples < 10000) throw Error("volume_Vr: at least 10^4 samples required");
  if (threads <= 0) threads = default_threads();
  std::vector<int64_t> shard_hits(kShards, 0);
  std::atomic<int> next{0};
  auto worker = [&]() {
    std::vector<int64_t> c(n);
    for (int s = next++; s < kShards; s = next++) {
      const int64_t begin = samples * s / kShards, end = samples * (s + 1) / kShards;
      uint64_t ctr = 0;
      int64_t hits = 0;
      for (int64_t i = begin; i < end; ++i) {
        int cls;
        do {
          for (int k = 0; k < n; ++k) {
            // odd numerators c/2^29 in (-1, 1)
            const int64_t u = static_cast<int64_t>(counter_rng(seed, s, ctr++) >> (64 - kGridBits));
            c[k] = 2 * u + 1 - (int64_t{1} << kGridBits);
          }
          cls = classify_sample(n, c);
        } while (cls < 0);
        if (cls == r) ++hits;
      }
      shard_hits[s] = hits;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  VolumeEstimate V;
  V.n = n;
  V.r = r;
  V.samples = samples;
  V.seed = seed;
  for (auto h : shard_hits) V.hits += h;
  const double cube = std::ldexp(1.0, n);
  const double ph = static_cast<double>(V.hits) / static_cast<double>(samples);
  V.estimate = cube * ph;
  V.half_width = 2.5758293035489 * cube * std::sqrt(ph * (1 - ph) / static_cast<double>(samples));
  return V;
}

Interval constant_Cinf(int n, const VolumeEstimate& V) {
  Interval r(to_mpq(std::max(0.0, V.estimate - V.half_width)), to_mpq(V.estimate + V.half_width));
  if (n % 2 == 0) r = r * Interval(inv_pow(2, n / 2));
  return r;
}

Interval predicted_count(int n, const Interval& Cfin, const Interval& Cinf, int64_t X) {
  if (X < 0) throw Error("predicted_count: X must be nonnegative");
  mpz_class xp;
  mpz_ui_pow_ui(xp.get_mpz_t(), static_cast<unsigned long>(X), static_cast<unsigned long>((n * n + n) / 2));
  return Cfin * Cinf * Interval(mpq_class(xp));
}

SliceSum slice_sum(int n, int64_t M) {
  if (M < 1) throw Error("slice_sum: M must be positive");
  SliceSum out;
  out.partial = Interval(1);
  out.full = Interval(1);
  for (int z : zpoly_exponents(n)) {
    Interval S = power_sum(z, M);
    mpq_class tl = mpq_class(1, z - 1) * inv_pow(M + 1, z - 1);
    mpq_class th = mpq_class(1, z - 1) * inv_pow(M, z - 1);
    out.partial = out.partial * S;
    out.full = out.full * (S + Interval(tl, th));
  }
  out.tail_bound = out.full.hi - out.partial.lo;
  return out;
}

Interval tail_over_threshold(int n, int64_t M) {
  if (M < 1) throw Error("tail_over_threshold: M must be positive");
  const auto z = zpoly_exponents(n);
  const __int128 bound = static_cast<__int128>(M) * M;
  const mpz_class one = fixed_one();
  mpz_class lo = 0, hi = 0, t, d;
  std::function<void(size_t, __int128)> rec = [&](size_t i, __int128 acc) {
    if (i == z.size()) {
      d = static_cast<unsigned long>(acc);
      mpz_fdiv_q(t.get_mpz_t(), one.get_mpz_t(), d.get_mpz_t());
      lo += t;
      mpz_cdiv_q(t.get_mpz_t(), one.get_mpz_t(), d.get_mpz_t());
      hi += t;
      return;
    }
    for (int64_t b = 1;; ++b) {
      __int128 v = acc;
      for (int k = 0; k < z[i] && v < bound; ++k) v *= b;
      if (v >= bound) break;
      rec(i + 1, v);
    }
  };
  rec(0, 1);
  Interval finite(mpq_class(lo, one), mpq_class(hi, one));
  finite.lo.canonicalize();
  finite.hi.canonicalize();
  return constant_Cfin(n) - finite;
}

}  // namespace redorb
