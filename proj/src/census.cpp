#include "redorb/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "redorb/archimedean.hpp"
#include "redorb/errors.hpp"
#include "redorb/poly.hpp"
#include "redorb/reduction.hpp"
#include "redorb/repcore.hpp"

namespace redorb {

namespace {

constexpr int64_t kTrialLimit = 1000000;

const std::vector<int64_t>& small_primes() {
  static const std::vector<int64_t> ps = primes_upto(kTrialLimit);
  return ps;
}

// smallest X >= 1 with |a| < X^i
int64_t min_height(const mpz_class& a, int i) {
  mpz_class r, aa = abs(a);
  mpz_root(r.get_mpz_t(), aa.get_mpz_t(), static_cast<unsigned long>(i));
  return r.get_si() + 1;
}

int64_t isqrt_u(uint64_t x) {
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return static_cast<int64_t>(r);
}

int64_t icbrt_u(uint64_t x) {
  auto r = static_cast<uint64_t>(std::cbrt(static_cast<double>(x)));
  while (r > 0 && r * r * r > x) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= x) ++r;
  return static_cast<int64_t>(r);
}

int64_t min_height3(int64_t f1, int64_t f2, int64_t f3) {
  const int64_t a = std::llabs(f1) + 1, b = isqrt_u(std::llabs(f2)) + 1, c = icbrt_u(std::llabs(f3)) + 1;
  return std::max({a, b, c});
}

__int128 disc3(int64_t f1, int64_t f2, int64_t f3) {
  const __int128 a = f1, b = f2, c = f3;
  return a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
}

mpz_class pollard_brent(const mpz_class& N, int64_t& budget) {
  if (mpz_even_p(N.get_mpz_t())) return 2;
  for (unsigned long c0 = 1;; ++c0) {
    mpz_class y = 2, c = c0, g = 1, q = 1, x, ys;
    const long m = 128;
    long r = 1;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), N.get_mpz_t());
    };
    do {
      x = y;
      for (long i = 0; i < r; ++i) step(y);
      long k = 0;
      do {
        ys = y;
        for (long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          q = q * abs(x - y);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), N.get_mpz_t());
        }
        budget -= std::min(m, r - k);
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), N.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
      if (budget < 0) throw FactorizationTimeout("Pollard rho budget exhausted on " + N.get_str());
    } while (g == 1);
    if (g == N) {
      do {
        step(ys);
        mpz_class d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), N.get_mpz_t());
      } while (g == 1);
    }
    if (g != N) return g;
  }
}

void factor_rest(const mpz_class& N, std::map<mpz_class, int>& out, int64_t& budget) {
  if (N == 1) return;
  if (mpz_probab_prime_p(N.get_mpz_t(), 30)) {
    ++out[N];
    return;
  }
  if (mpz_perfect_square_p(N.get_mpz_t())) {
    mpz_class s = sqrt(N);
    factor_rest(s, out, budget);
    factor_rest(s, out, budget);
    return;
  }
  mpz_class d = pollard_brent(N, budget);
  factor_rest(d, out, budget);
  factor_rest(N / d, out, budget);
}

std::string poly_str(const ZPoly& f) {
  std::string s = "[";
  for (int i = 1; i <= f.n; ++i) s += (i > 1 ? "," : "") + f.f(i).get_str();
  return s + "]";
}

bool parity_ok(const ZPoly& f) {
  if (f.n % 2) return true;
  for (int i = 1; i <= f.n; i += 2)
    if (mpz_odd_p(f.f(i).get_mpz_t())) return false;
  return true;
}

// lexicographic walk over the box; cb(f, r) with r = -1 for degenerate f
struct Walk {
  int64_t candidates = 0, parity_rejected = 0;
};
Walk walk_box(int n, int64_t X, bool parity_filter, const std::function<void(const ZPoly&, int)>& cb) {
  if (X < 1) throw Error("enumerate_invariants: X must be a positive integer");
  std::vector<mpz_class> lim(n);
  for (int i = 0; i < n; ++i) mpz_ui_pow_ui(lim[i].get_mpz_t(), static_cast<unsigned long>(X), static_cast<unsigned long>(i + 1));
  ZPoly f(std::vector<mpz_class>(n), RingTag::integers());
  for (int i = 0; i < n; ++i) f.c[i] = -lim[i] + 1;
  Walk w;
  while (true) {
    ++w.candidates;
    if (parity_filter && !parity_ok(f)) {
      ++w.parity_rejected;
    } else if (sgn(poly_disc(f)) == 0) {
      cb(f, -1);
    } else {
      cb(f, sturm_real_roots(f));
    }
    int i = n - 1;
    while (i >= 0 && f.c[i] + 1 == lim[i]) {
      f.c[i] = -lim[i] + 1;
      --i;
    }
    if (i < 0) break;
    f.c[i] += 1;
  }
  return w;
}

int64_t min_height_poly(const ZPoly& f) {
  int64_t h = 1;
  for (int i = 1; i <= f.n; ++i) h = std::max(h, min_height(f.f(i), i));
  return h;
}

// per-prime family data for the n = 3 fast path
struct FamPrime {
  int64_t p = 0;
  bool unit = false, residues = false;
  std::vector<std::pair<int64_t, std::set<std::vector<int64_t>>>> inv_sets;  // (modulus, allowed f mod q)
};

std::vector<FamPrime> family_primes(const FamilySpec& fam) {
  std::vector<FamPrime> out;
  for (int64_t p : fam.primes()) {
    FamPrime fp;
    fp.p = p;
    for (const auto& c : fam.at(p)) {
      if (c.kind == CondKind::UnitLambda) fp.unit = true;
      if (c.kind == CondKind::Residues) fp.residues = true;
      if (c.kind == CondKind::InvIn) {
        const int64_t q = ipow(p, c.j);
        std::set<std::vector<int64_t>> s;
        for (auto r : c.residues) {
          for (auto& v : r) v = ((v % q) + q) % q;
          s.insert(r);
        }
        fp.inv_sets.emplace_back(q, std::move(s));
      }
    }
    out.push_back(std::move(fp));
  }
  return out;
}

bool has_factor(const std::vector<int64_t>& ps, int64_t p) { return std::find(ps.begin(), ps.end(), p) != ps.end(); }

int64_t weight3(int64_t f1, int64_t f2, int64_t f3, uint64_t absD, const std::vector<FamPrime>& fam, const FamilySpec& spec) {
  int64_t w = 1;
  std::vector<int64_t> conditioned;
  for (const auto& fp : fam) {
    conditioned.push_back(fp.p);
    for (const auto& [q, s] : fp.inv_sets) {
      std::vector<int64_t> r{((f1 % q) + q) % q, ((f2 % q) + q) % q, ((f3 % q) + q) % q};
      if (!s.count(r)) return 0;
    }
    int64_t c;
    if (fp.residues) {
      c = orbit_count_local_family(zpoly_of({f1, f2, f3}), fp.p, spec);
    } else if (fp.unit) {
      c = cubic_local_count(f1, f2, f3, fp.p, true);
    } else {
      const auto p2 = static_cast<uint64_t>(fp.p * fp.p);
      c = absD % p2 == 0 ? cubic_local_count(f1, f2, f3, fp.p) : 1;
    }
    if (c == 0) return 0;
    w *= c;
  }
  for (int64_t p : square_divisor_primes(absD))
    if (!has_factor(conditioned, p)) w *= cubic_local_count(f1, f2, f3, p);
  return w;
}

// per-shard tallies, indexed by minimal height and r
struct Tally {
  int64_t Xmax = 0;
  // [h][r]: r index 0..n, plus degenerate per h
  std::vector<std::vector<int64_t>> emp, polys;
  std::vector<int64_t> degen;
  std::map<int64_t, int64_t> hist[9];
  std::vector<std::string> anomalies;
  std::vector<std::vector<int64_t>> anomaly_count;
  explicit Tally(int n = 3, int64_t X = 1) : Xmax(X) {
    emp.assign(X + 1, std::vector<int64_t>(n + 1, 0));
    polys = emp;
    anomaly_count = emp;
    degen.assign(X + 1, 0);
  }
  void merge(const Tally& o) {
    for (size_t h = 0; h < emp.size(); ++h) {
      for (size_t r = 0; r < emp[h].size(); ++r) {
        emp[h][r] += o.emp[h][r];
        polys[h][r] += o.polys[h][r];
        anomaly_count[h][r] += o.anomaly_count[h][r];
      }
      degen[h] += o.degen[h];
    }
    for (int r = 0; r < 9; ++r)
      for (const auto& [k, v] : o.hist[r]) hist[r][k] += v;
    anomalies.insert(anomalies.end(), o.anomalies.begin(), o.anomalies.end());
  }
};

Tally census_n3(int64_t X, const FamilySpec& fam, int threads) {
  const auto fp = family_primes(fam);
  const int64_t X2 = X * X, X3 = X2 * X;
  const int64_t shards = 2 * X - 1;
  std::vector<Tally> parts(shards, Tally(3, X));
  std::atomic<int64_t> next{0};
  auto worker = [&]() {
    for (int64_t s = next++; s < shards; s = next++) {
      Tally& T = parts[s];
      const int64_t f1 = s - (X - 1);
      for (int64_t f2 = -X2 + 1; f2 < X2; ++f2)
        for (int64_t f3 = -X3 + 1; f3 < X3; ++f3) {
          const int64_t h = min_height3(f1, f2, f3);
          const __int128 D = disc3(f1, f2, f3);
          if (D == 0) {
            ++T.degen[h];
            continue;
          }
          const int r = D > 0 ? 3 : 1;
          const auto absD = static_cast<uint64_t>(D > 0 ? D : -D);
          const int64_t w = weight3(f1, f2, f3, absD, fp, fam);
          T.emp[h][r] += w;
          ++T.polys[h][r];
          ++T.hist[r][w];
        }
    }
  };
  if (threads <= 0) threads = default_threads();
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int64_t>(threads, shards); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  Tally out(3, X);
  for (const auto& p : parts) out.merge(p);
  return out;
}

Tally census_generic(int n, int64_t X, const FamilySpec& fam) {
  Tally T(n, X);
  walk_box(n, X, n % 2 == 0, [&](const ZPoly& f, int r) {
    const int64_t h = min_height_poly(f);
    if (r < 0) {
      ++T.degen[h];
      return;
    }
    ++T.polys[h][r];
    int64_t w;
    try {
      w = orbit_count_global_family(f, fam);
    } catch (const Error& e) {
      T.anomalies.push_back(poly_str(f) + ": " + e.what());
      ++T.anomaly_count[h][r];
      w = 1;
    }
    T.emp[h][r] += w;
    ++T.hist[r][w];
  });
  return T;
}

std::string ratio_str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << x;
  return os.str();
}

mpq_class parse_decimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return mpq_class(mpz_class(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(s.size() - dot - 1));
  mpq_class q(mpz_class(digits), den);
  q.canonicalize();
  return q;
}

constexpr int kDigits = 6;

nlohmann::json interval_json(const Interval& I) { return {decimal_down(I.lo, kDigits), decimal_up(I.hi, kDigits)}; }
Interval interval_from(const nlohmann::json& j) { return {parse_decimal(j.at(0).get<std::string>()), parse_decimal(j.at(1).get<std::string>())}; }

std::string r_str(int r) { return r < 0 ? "all" : std::to_string(r); }
int r_parse(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "all") return -1;
    return std::stoi(j.get<std::string>());
  }
  return j.get<int>();
}

}  // namespace

EnumStats enumerate_invariants(int n, int64_t X, int r_filter, bool parity_filter, const std::function<void(const ZPoly&)>& emit) {
  EnumStats st;
  auto w = walk_box(n, X, parity_filter && n % 2 == 0, [&](const ZPoly& f, int r) {
    if (r < 0) {
      ++st.degenerate;
      return;
    }
    if (r_filter >= 0 && r != r_filter) return;
    ++st.emitted;
    emit(f);
  });
  st.candidates = w.candidates;
  st.parity_rejected = w.parity_rejected;
  return st;
}

std::map<mpz_class, int> factor_integer(const mpz_class& N, int64_t rho_budget) {
  if (N == 0) throw Error("factor_integer: zero has no factorization");
  std::map<mpz_class, int> out;
  mpz_class R = abs(N);
  for (int64_t p : small_primes()) {
    if (mpz_class(p) * p > R) break;
    while (mpz_divisible_ui_p(R.get_mpz_t(), static_cast<unsigned long>(p))) {
      mpz_divexact_ui(R.get_mpz_t(), R.get_mpz_t(), static_cast<unsigned long>(p));
      ++out[mpz_class(p)];
    }
  }
  if (R == 1) return out;
  if (R < mpz_class(kTrialLimit) * kTrialLimit || mpz_probab_prime_p(R.get_mpz_t(), 30)) {
    ++out[R];
    return out;
  }
  int64_t budget = rho_budget;
  factor_rest(R, out, budget);
  return out;
}

std::vector<int64_t> square_divisor_primes(uint64_t D) {
  if (D == 0) throw Error("square_divisor_primes: zero");
  std::vector<int64_t> out;
  uint64_t R = D;
  for (int64_t p : small_primes()) {
    const auto up = static_cast<uint64_t>(p);
    if (up * up * up > R) break;
    if (R % up) continue;
    int e = 0;
    while (R % up == 0) {
      R /= up;
      ++e;
    }
    if (e >= 2) out.push_back(p);
  }
  // every prime factor of R now exceeds the cube root of R: R is 1, p, p^2 or p*q
  if (R > 1) {
    if (static_cast<unsigned __int128>(kTrialLimit) * kTrialLimit * kTrialLimit < R) {
      for (const auto& [p, e] : factor_integer(mpz_class(std::to_string(R))))
        if (e >= 2) out.push_back(p.get_si());
    } else {
      const int64_t s = isqrt_u(R);
      if (static_cast<uint64_t>(s) * static_cast<uint64_t>(s) == R) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int64_t orbit_count_global(const ZPoly& f) { return orbit_count_global_family(f, FamilySpec::full(f.n)); }

int64_t orbit_count_global_family(const ZPoly& f, const FamilySpec& fam) {
  const mpz_class D = poly_disc(f);
  if (sgn(D) == 0) throw DegenerateInput("orbit_count_global: disc(f) = 0");
  if (!parity_ok(f)) throw InvalidParity("orbit_count_global: f_i must be even for odd i when n is even");
  std::set<int64_t> ps;
  for (const auto& [p, e] : factor_integer(D)) {
    if (e < 2) continue;
    if (!p.fits_slong_p()) throw InstanceTooLarge("orbit_count_global: prime " + p.get_str() + " exceeds machine range");
    ps.insert(p.get_si());
  }
  for (int64_t p : fam.primes()) ps.insert(p);
  int64_t w = 1;
  for (int64_t p : ps) {
    const int64_t c = orbit_count_local_family(f, p, fam);
    if (c == 0) return 0;
    w *= c;
  }
  return w;
}

nlohmann::json CensusConfig::to_json() const {
  return {{"n", n},       {"r", r_str(r)}, {"sweep", sweep},     {"family", family.to_json()},
          {"samples", samples}, {"seed", seed},  {"P_max", P_max}};
}

uint64_t CensusConfig::hash() const {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

CensusReport census(const CensusConfig& cfg_in) {
  const auto t0 = std::chrono::steady_clock::now();
  CensusConfig cfg = cfg_in;
  const int n = cfg.n;
  if (n < 3) throw Error("census: n must be at least 3");
  if (n > 4) throw BoxTooLarge("census: exhaustive mode supports n = 3, 4");
  if (cfg.family.n != n) throw Error("census: family degree differs from n");
  cfg.family.validate();
  if (cfg.r >= 0) require_valid_r(n, cfg.r);
  if (cfg.sweep.empty()) throw Error("census: empty X sweep");
  std::sort(cfg.sweep.begin(), cfg.sweep.end());
  cfg.sweep.erase(std::unique(cfg.sweep.begin(), cfg.sweep.end()), cfg.sweep.end());
  if (cfg.sweep.front() < 1) throw Error("census: X must be positive");
  const int64_t X = cfg.sweep.back();
  // box size guard
  const double box = std::pow(2.0 * static_cast<double>(X), (n * n + n) / 2.0);
  if (box > 5e9) throw BoxTooLarge("census: box too large for X = " + std::to_string(X));

  Tally T = n == 3 ? census_n3(X, cfg.family, cfg.threads) : census_generic(n, X, cfg.family);

  CensusReport rep;
  rep.n = n;
  rep.r = cfg.r;
  rep.X = X;
  rep.config_hash = cfg.hash();
  rep.anomalies = T.anomalies;
  std::sort(rep.anomalies.begin(), rep.anomalies.end());

  std::vector<int> strata;
  for (int r = 0; r <= n; ++r)
    if (valid_r(n, r) && (cfg.r < 0 || cfg.r == r)) strata.push_back(r);

  if (cfg.family.conditions.empty()) {
    rep.cfin = constant_Cfin(n);
  } else {
    std::map<int64_t, mpq_class> over;
    for (int64_t p : cfg.family.primes()) over[p] = euler_local_term(n, p, cfg.family);
    rep.cfin = euler_product(n, over, cfg.P_max);
  }
  std::map<int, Interval> cinf;
  for (int r : strata) {
    auto V = volume_Vr(n, r, cfg.samples, cfg.seed, cfg.threads);
    rep.volumes[r] = V.to_json();
    cinf[r] = constant_Cinf(n, V);
  }

  auto row = [&](int64_t x, int r) {
    SweepRow s;
    s.X = x;
    s.r = r;
    s.predicted = Interval(0);
    for (int rr : strata) {
      if (r >= 0 && rr != r) continue;
      for (int64_t h = 1; h <= x; ++h) {
        s.empirical += T.emp[h][rr];
        s.anomalies += T.anomaly_count[h][rr];
      }
      s.predicted = s.predicted + predicted_count(n, rep.cfin, cinf[rr], x);
    }
    const double mid = s.predicted.mid().get_d();
    s.ratio = mid > 0 ? static_cast<double>(s.empirical) / mid : 0.0;
    return s;
  };
  for (int64_t x : cfg.sweep) {
    for (int r : strata) rep.sweep.push_back(row(x, r));
    if (cfg.r < 0) rep.sweep.push_back(row(x, -1));
  }
  const SweepRow top = row(X, cfg.r);
  rep.empirical = top.empirical;
  rep.predicted = top.predicted;
  rep.ratio = top.ratio;
  for (int r : strata) {
    for (int64_t h = 1; h <= X; ++h) rep.polynomials += T.polys[h][r];
    for (const auto& [k, v] : T.hist[r]) rep.histogram[k] += v;
  }
  for (int64_t h = 1; h <= X; ++h) rep.degenerate += T.degen[h];
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::json CensusReport::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [k, v] : histogram) hist[std::to_string(k)] = v;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : sweep)
    rows.push_back({{"X", s.X},
                    {"r", r_str(s.r)},
                    {"empirical", s.empirical},
                    {"predicted", interval_json(s.predicted)},
                    {"ratio", ratio_str(s.ratio)},
                    {"anomalies", s.anomalies}});
  nlohmann::json vols = nlohmann::json::object();
  for (const auto& [r, v] : volumes) vols[std::to_string(r)] = v;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  return {{"n", n},
          {"r", r_str(r)},
          {"X", X},
          {"empirical", empirical},
          {"predicted", interval_json(predicted)},
          {"ratio", ratio_str(ratio)},
          {"polynomials", polynomials},
          {"degenerate", degenerate},
          {"histogram", hist},
          {"anomalies", anomalies},
          {"sweep", rows},
          {"Vr", vols},
          {"Cfin", interval_json(cfin)},
          {"config_hash", hex}};
}

CensusReport CensusReport::from_json(const nlohmann::json& j) {
  CensusReport c;
  c.n = j.at("n").get<int>();
  c.r = r_parse(j.at("r"));
  c.X = j.at("X").get<int64_t>();
  c.empirical = j.at("empirical").get<int64_t>();
  c.predicted = interval_from(j.at("predicted"));
  c.ratio = std::stod(j.at("ratio").get<std::string>());
  c.polynomials = j.at("polynomials").get<int64_t>();
  c.degenerate = j.at("degenerate").get<int64_t>();
  for (const auto& [k, v] : j.at("histogram").items()) c.histogram[std::stoll(k)] = v.get<int64_t>();
  c.anomalies = j.at("anomalies").get<std::vector<std::string>>();
  for (const auto& s : j.at("sweep")) {
    SweepRow w;
    w.X = s.at("X").get<int64_t>();
    w.r = r_parse(s.at("r"));
    w.empirical = s.at("empirical").get<int64_t>();
    w.predicted = interval_from(s.at("predicted"));
    w.ratio = std::stod(s.at("ratio").get<std::string>());
    w.anomalies = s.at("anomalies").get<int64_t>();
    c.sweep.push_back(w);
  }
  for (const auto& [k, v] : j.at("Vr").items()) c.volumes[std::stoi(k)] = v;
  c.cfin = interval_from(j.at("Cfin"));
  c.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
  return c;
}

std::string CensusReport::to_csv() const {
  std::ostringstream os;
  os << "X,r,empirical,predicted_lo,predicted_hi,ratio,anomalies\n";
  for (const auto& s : sweep)
    os << s.X << ',' << r_str(s.r) << ',' << s.empirical << ',' << decimal_down(s.predicted.lo, kDigits) << ','
       << decimal_up(s.predicted.hi, kDigits) << ',' << ratio_str(s.ratio) << ',' << s.anomalies << '\n';
  return os.str();
}

CrossCheck cross_check_direct(int n, int64_t X) {
  if (n != 3) throw Error("cross_check_direct: only n = 3 is supported");
  if (X < 1) throw Error("cross_check_direct: X must be positive");
  if (X > 4) throw BoxTooLarge("cross_check_direct: X must be at most 4");
  CrossCheck out;
  const int64_t X2 = X * X, X3 = X2 * X;
  walk_box(3, X, false, [&](const ZPoly& f, int r) {
    if (r >= 0) out.method2 += orbit_count_global(f);
  });
  // canonical B = [[0,b,t],[b,c,d],[t,d,e]], b > 0, 0 <= t < 2b.
  // inv = (c + 2t, -2bd + 2ct + t^2, b^2 e - 2bdt + ct^2); b^2 = Z(B) divides disc, and |disc| < 54 X^6
  const int64_t bmax = isqrt_u(static_cast<uint64_t>(54 * X3 * X3));
  auto floordiv = [](int64_t a, int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
  auto ceildiv = [&](int64_t a, int64_t b) { return -floordiv(-a, b); };
  std::set<IntKey> seen;
  const RingTag Z = RingTag::integers();
  for (int64_t b = 1; b <= bmax; ++b)
    for (int64_t t = 0; t < 2 * b; ++t)
      for (int64_t c = -X + 1 - 2 * t; c < X - 2 * t; ++c) {
        const int64_t base2 = 2 * c * t + t * t;
        const int64_t dlo = ceildiv(base2 - X2 + 1, 2 * b), dhi = floordiv(base2 + X2 - 1, 2 * b);
        for (int64_t d = dlo; d <= dhi; ++d) {
          const int64_t K = c * t * t - 2 * b * d * t;
          const int64_t elo = ceildiv(-X3 + 1 - K, b * b), ehi = floordiv(X3 - 1 - K, b * b);
          for (int64_t e = elo; e <= ehi; ++e) {
            SymMatrix<mpz_class> B(3, Z);
            B.set(1, 2, b);
            B.set(1, 3, t);
            B.set(2, 2, c);
            B.set(2, 3, d);
            B.set(3, 3, e);
            const ZPoly f = inv(B);
            if (!height_below(f, static_cast<long>(X))) throw Error("cross_check_direct: entry bounds admit a point above the height");
            const mpz_class D = poly_disc(f);
            if (sgn(D) == 0) continue;
            if (!mpz_divisible_p(D.get_mpz_t(), mpz_class(b * b).get_mpz_t()))
              throw Error("cross_check_direct: slice entry square does not divide disc");
            out.max_slice = std::max(out.max_slice, b);
            seen.insert(key_of(canonical_form_Z(B).B));
          }
        }
      }
  out.direct = static_cast<int64_t>(seen.size());
  return out;
}

}  // namespace redorb
