#include <doctest.h>

#include <cstdlib>
#include <random>
#include <set>
#include <string>

#include "redorb/archimedean.hpp"
#include "redorb/census.hpp"
#include "redorb/errors.hpp"
#include "redorb/local.hpp"

using namespace redorb;

namespace {

std::map<mpz_class, int> naive_factor(mpz_class N) {
  std::map<mpz_class, int> out;
  if (N < 0) N = -N;
  for (mpz_class p = 2; p * p <= N; ++p)
    while (N % p == 0) {
      ++out[p];
      N /= p;
    }
  if (N > 1) ++out[N];
  return out;
}

FamilySpec unit2() {
  FamilySpec fam = FamilySpec::full(3);
  fam.name = "unit-lambda-2";
  fam.conditions.push_back({2, 1, CondKind::UnitLambda, {}});
  return fam;
}

int run(const std::string& args) {
  const std::string cmd = std::string(REDORB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

}  // namespace

TEST_SUITE("census") {
  TEST_CASE("enumeration") {
    int64_t seen = 0;
    auto s1 = enumerate_invariants(3, 1, -1, false, [&](const ZPoly&) { ++seen; });
    CHECK(seen == 0);
    CHECK(s1.candidates == 1);
    CHECK(s1.degenerate == 1);
    auto s2 = enumerate_invariants(3, 2, -1, false, [](const ZPoly&) {});
    CHECK(s2.candidates == 315);
    CHECK(s2.emitted + s2.degenerate == s2.candidates);
    int64_t r1 = 0, r3 = 0;
    enumerate_invariants(3, 3, 1, false, [&](const ZPoly&) { ++r1; });
    enumerate_invariants(3, 3, 3, false, [&](const ZPoly&) { ++r3; });
    auto s3 = enumerate_invariants(3, 3, -1, false, [](const ZPoly&) {});
    CHECK(r1 + r3 == s3.emitted);
    // lexicographic order
    std::vector<long> prev;
    bool ordered = true;
    enumerate_invariants(3, 2, -1, false, [&](const ZPoly& f) {
      std::vector<long> cur;
      for (const auto& c : f.c) cur.push_back(c.get_si());
      ordered = ordered && (prev.empty() || prev < cur);
      prev = cur;
    });
    CHECK(ordered);
    // even degree parity filter keeps only f_1, f_3 even
    auto s4 = enumerate_invariants(4, 2, -1, true, [](const ZPoly& f) {
      CHECK(f.c[0] % 2 == 0);
      CHECK(f.c[2] % 2 == 0);
    });
    CHECK(s4.parity_rejected > 0);
    CHECK(s4.emitted + s4.degenerate + s4.parity_rejected == s4.candidates);
  }

  TEST_CASE("factorization") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> u(2, 100000000);
    for (int t = 0; t < 200; ++t) {
      mpz_class N = u(rng);
      if (t % 3 == 0) N = -N;
      CHECK(factor_integer(N) == naive_factor(N));
    }
    // beyond trial division: a product of two primes above 10^6
    const mpz_class p("1000003"), q("1000033");
    auto f = factor_integer(p * q * 12);
    CHECK(f.size() == 4);
    CHECK(f[p] == 1);
    CHECK(f[q] == 1);
    CHECK(f[2] == 2);
    auto g = factor_integer(p * p * q);
    CHECK(g[p] == 2);
    CHECK(g[q] == 1);
    CHECK_THROWS(factor_integer(0));
  }

  TEST_CASE("square divisor primes") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<uint64_t> u(1, 10000000);
    for (int t = 0; t < 300; ++t) {
      uint64_t D = u(rng);
      auto fac = naive_factor(mpz_class(std::to_string(D)));
      if (t % 4 == 0) {
        D *= 49;
        fac[7] += 2;
      }
      if (t % 5 == 0 && t % 4 != 0) {
        D *= 1000003ULL * 1000003ULL;
        fac[1000003] += 2;
      }
      std::vector<int64_t> want;
      for (const auto& [p, e] : fac)
        if (e >= 2) want.push_back(p.get_si());
      CHECK(square_divisor_primes(D) == want);
    }
  }

  TEST_CASE("global counts") {
    // squarefree discriminant: one orbit
    for (auto c : std::vector<std::vector<long>>{{0, 1, 1}, {0, -1, 1}, {1, 2, 3}}) {
      ZPoly f = zpoly_of(c);
      bool sqfree = true;
      for (const auto& [p, e] : factor_integer(poly_disc(f))) sqfree = sqfree && e == 1;
      if (sqfree) CHECK(orbit_count_global(f) == 1);
    }
    // multiplicative over the primes with p^2 | disc
    for (auto c : std::vector<std::vector<long>>{{0, 0, 36}, {0, -12, 20}, {0, 0, 100}}) {
      ZPoly f = zpoly_of(c);
      int64_t prod = 1;
      for (const auto& [p, e] : factor_integer(poly_disc(f)))
        if (e >= 2) prod *= orbit_count_local(f, p.get_si());
      CHECK(orbit_count_global(f) == prod);
    }
    CHECK(orbit_count_global(zpoly_of({0, 0, 4})) == 3);
    auto fam = unit2();
    for (auto c : std::vector<std::vector<long>>{{0, 0, 4}, {0, 0, 16}, {2, 0, 36}})
      CHECK(orbit_count_global_family(zpoly_of(c), fam) <= orbit_count_global(zpoly_of(c)));
  }

  TEST_CASE("census agrees with direct enumeration") {
    auto cc = cross_check_direct(3, 3);
    CHECK(cc.method2 == cc.direct);
    CHECK(cc.method2 == 7002);
    CHECK(cross_check_direct(3, 2).direct == 412);
    CHECK_THROWS_AS(cross_check_direct(3, 5), BoxTooLarge);
    CensusConfig cfg;
    cfg.sweep = {3};
    cfg.samples = 100000;
    cfg.threads = 1;
    auto rep = census(cfg);
    CHECK(rep.empirical == cc.method2);
    CHECK(rep.anomalies.empty());
  }

  TEST_CASE("strata, families and determinism") {
    CensusConfig base;
    base.sweep = {2, 4};
    base.samples = 100000;
    base.threads = 1;
    auto all = census(base);
    auto c1 = base, c3 = base;
    c1.r = 1;
    c3.r = 3;
    auto r1 = census(c1), r3 = census(c3);
    CHECK(r1.empirical + r3.empirical == all.empirical);
    CHECK(r1.polynomials + r3.polynomials == all.polynomials);
    CHECK(all.X == 4);
    int64_t hsum = 0;
    for (const auto& [v, k] : all.histogram) hsum += k;
    CHECK(hsum == all.polynomials);
    // a subfamily never counts more
    auto cf = base;
    cf.family = unit2();
    auto fr = census(cf);
    CHECK(fr.empirical <= all.empirical);
    CHECK(fr.empirical > 0);
    // fast family weights vs the generic route
    int64_t slow = 0;
    enumerate_invariants(3, 4, -1, false, [&](const ZPoly& f) { slow += orbit_count_global_family(f, cf.family); });
    CHECK(fr.empirical == slow);
    // determinism and JSON round trip
    auto again = census(base);
    CHECK(again.to_json() == all.to_json());
    CHECK(CensusReport::from_json(all.to_json()).to_json() == all.to_json());
    CHECK(all.config_hash == base.hash());
    auto other = base;
    other.seed = 2;
    CHECK(other.hash() != base.hash());
    const std::string csv = all.to_csv();
    CHECK(csv.rfind("X,r,empirical,predicted_lo,predicted_hi,ratio,anomalies", 0) == 0);
  }

  TEST_CASE("degree 4") {
    CensusConfig cfg;
    cfg.n = 4;
    cfg.family = FamilySpec::full(4);
    cfg.sweep = {2};
    cfg.samples = 10000;
    cfg.threads = 1;
    auto rep = census(cfg);
    CHECK(rep.empirical >= rep.polynomials);
    CHECK(rep.polynomials > 0);
    CHECK(rep.anomalies.empty());
    cfg.sweep = {60};
    CHECK_THROWS_AS(census(cfg), BoxTooLarge);
  }

  TEST_CASE("command line") {
    CHECK(run("verify euler --n 3 --pmax 100") == 0);
    CHECK(run("census --n 3 --x 2 --samples 20000 --threads 1") == 0);
    CHECK(run("census --n 3") == 2);
    CHECK(run("census --n 3 --x 2 --r 2 --samples 20000") == 2);
    CHECK(run("reduce --matrix '[[0,1,0],[1,0,0],[0,0,1]]' --ring ZZ") == 0);
    CHECK(run("local-density --n 3 --p 2") == 0);
    CHECK(run("nonsense") == 2);
  }
}
