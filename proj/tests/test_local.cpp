#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "redorb/archimedean.hpp"
#include "redorb/census.hpp"
#include "redorb/errors.hpp"
#include "redorb/local.hpp"

using namespace redorb;

namespace {

mpq_class pw(int64_t p, int e) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(mpz_class(1), d) : mpq_class(d);
}

// integral of |b|_p^e over Z_p truncated after K valuation shells
mpq_class shell_sum(int64_t p, int e, int K) {
  mpq_class s = 0;
  for (int k = 0; k < K; ++k) s += pw(p, -k * e) * (pw(p, -k) - pw(p, -k - 1));
  return s;
}

std::vector<int64_t> inv3(const std::vector<int64_t>& B) {
  // B = [[0,b,t],[b,c,d],[t,d,e]]
  const int64_t b = B[1], t = B[2], c = B[4], d = B[5], e = B[8];
  return {c + 2 * t, -2 * b * d + 2 * c * t + t * t, b * b * e - 2 * b * d * t + c * t * t};
}

std::vector<int64_t> inv_generic(const std::vector<int64_t>& B) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(B.size()))));
  std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = B[i * n + j];
  auto f = oracle::inv_interp(M);
  std::vector<int64_t> out;
  for (auto& v : f) out.push_back(v.get_num().get_si());
  return out;
}

// number of integral canonical forms [[0,b,t],[b,c,d],[t,d,e]] (b > 0, 0 <= t < 2b) with inv = f exactly
int64_t canonical_forms_over(int64_t f1, int64_t f2, int64_t f3) {
  const __int128 D = static_cast<__int128>(f1) * f1 * f2 * f2 - 4 * static_cast<__int128>(f2) * f2 * f2 -
                     4 * static_cast<__int128>(f1) * f1 * f1 * f3 - 27 * static_cast<__int128>(f3) * f3 +
                     18 * static_cast<__int128>(f1) * f2 * f3;
  const __int128 aD = D < 0 ? -D : D;
  int64_t count = 0;
  for (int64_t b = 1; static_cast<__int128>(b) * b <= aD; ++b) {
    if (aD % (static_cast<__int128>(b) * b)) continue;
    for (int64_t t = 0; t < 2 * b; ++t) {
      const int64_t c = f1 - 2 * t;
      const int64_t num_d = 2 * c * t + t * t - f2;
      if (num_d % (2 * b)) continue;
      const int64_t d = num_d / (2 * b);
      const int64_t num_e = f3 + 2 * b * d * t - c * t * t;
      if (num_e % (b * b)) continue;
      ++count;
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("local") {
  TEST_CASE("lambda integral, full family, against shell sums") {
    for (int64_t p : {2, 3, 5, 7}) {
      for (int n = 3; n <= 7; ++n) {
        mpq_class want = 1;
        const int K = 30;
        mpq_class slack = 0;
        for (int e : lambda_exponents(n)) {
          want *= shell_sum(p, e, K);
          slack += pw(p, -K);
        }
        const mpq_class got = local_lambda_integral(n, p, FamilySpec::full(n)).value;
        CHECK(got >= want);
        CHECK(got - want <= slack * 4);
      }
    }
    CHECK(local_lambda_integral(3, 3, FamilySpec::full(3)).value == mpq_class(3, 4));
  }

  TEST_CASE("unit-lambda family volume") {
    for (int64_t p : {2, 3, 5}) {
      for (int n = 3; n <= 6; ++n) {
        FamilySpec fam = FamilySpec::full(n);
        fam.conditions.push_back({p, 1, CondKind::UnitLambda, {}});
        mpq_class want = 1;
        for (int e : lambda_exponents(n))
          if (e > 0) want *= 1 - pw(p, -1);
        CHECK(local_lambda_integral(n, p, fam).value == want);
      }
    }
  }

  TEST_CASE("Euler factor identity examples") {
    auto a = euler_factor_identity(3, 2);
    CHECK(a.lhs == mpq_class(4, 3));
    CHECK(a.rhs == mpq_class(4, 3));
    CHECK(euler_factor_identity(5, 3).equal);
    CHECK(euler_factor_identity(4, 5).equal);
    for (int n = 3; n <= 9; ++n)
      for (int64_t p : primes_upto(100)) REQUIRE(euler_factor_identity(n, p).equal);
    for (int64_t p : {2, 3, 5, 7}) CHECK(euler_local_term(3, p, FamilySpec::full(3)) == 1 / (1 - pw(p, -2)));
  }

  TEST_CASE("orbit-count route equals lambda route at n = 3") {
    for (int64_t p : {2, 3, 5}) {
      // unit lambda
      FamilySpec u = FamilySpec::full(3);
      u.conditions.push_back({p, 1, CondKind::UnitLambda, {}});
      CHECK(euler_local_term(3, p, u) == local_orbit_integral(3, p, u).value);
      CHECK(euler_local_term(3, p, FamilySpec::full(3)) == local_orbit_integral(3, p, FamilySpec::full(3)).value);
      // single residue classes of inv mod p
      std::mt19937_64 rng(p);
      std::uniform_int_distribution<long> r(0, p - 1);
      for (int t = 0; t < 4; ++t) {
        FamilySpec fam = FamilySpec::full(3);
        fam.conditions.push_back({p, 1, CondKind::InvIn, {{r(rng), r(rng), r(rng)}, {r(rng), r(rng), r(rng)}}});
        CHECK(euler_local_term(3, p, fam) == local_orbit_integral(3, p, fam).value);
      }
    }
  }

  TEST_CASE("Euler product enclosures") {
    const mpq_class z2_lo("16449340668482264/10000000000000000"), z2_hi("16449340668482265/10000000000000000");
    auto I = euler_product(3, {}, 100000);
    CHECK(I.lo <= z2_hi);
    CHECK(I.hi >= z2_lo);
    CHECK(I.width() < mpq_class(1, 1000000));
    auto Z = euler_product(3, {{2, mpq_class(0)}}, 1000);
    CHECK(Z.lo == 0);
    CHECK(Z.hi == 0);
    auto I4 = euler_product(4, {}, 100000);
    const mpq_class z22("27058080842778454788/10000000000000000000");
    CHECK(I4.lo <= z22 + mpq_class(1, 1000000000));
    CHECK(I4.hi >= z22 - mpq_class(1, 1000000000));
  }

  TEST_CASE("fiber counts against brute force") {
    for (int64_t q : {4, 8, 9}) {
      const int64_t p = q % 2 ? 3 : 2;
      const int k = q == 4 ? 2 : (q == 8 ? 3 : 2);
      for (auto c : std::vector<std::vector<long>>{{0, 0, 4}, {1, 0, 0}, {0, 1, 1}, {3, 5, 7}}) {
        std::vector<int64_t> f(c.begin(), c.end());
        CHECK(static_cast<int64_t>(fiber_mod(zpoly_of(c), p, k).size()) == oracle::brute_fiber_count(3, q, f, inv3));
      }
    }
    for (auto c : std::vector<std::vector<long>>{{0, 1, 0, 1}, {2, 0, 2, 1}}) {
      std::vector<int64_t> f(c.begin(), c.end());
      CHECK(static_cast<int64_t>(fiber_mod(zpoly_of(c), 3, 1).size()) == oracle::brute_fiber_count(4, 3, f, inv_generic));
    }
  }

  TEST_CASE("local counts: closed form, union-find and canonical enumeration agree") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> u(-6, 6);
    int checked = 0;
    while (checked < 60) {
      std::vector<long> c{u(rng), u(rng), u(rng)};
      for (int64_t p : {2, 3, 5}) {
        // push the polynomial towards p^2 | disc: x^3 + p^2 (...)
        std::vector<long> cc{p * c[0], p * p * c[1], p * p * p * c[2] + p * p};
        ZPoly f = zpoly_of(cc);
        const mpz_class D = poly_disc(f);
        if (D == 0) continue;
        const int v = padic_val(D, p);
        const int64_t closed = cubic_local_count(cc[0], cc[1], cc[2], p);
        const int64_t canon = static_cast<int64_t>(local_canonical_reps(f, p).size());
        REQUIRE(closed == canon);
        if ((p == 2 && v <= 3) || (p == 3 && v <= 2)) CHECK(orbit_count_local_stabilized(f, p) == closed);
        CHECK(closed >= 1);
        ++checked;
      }
    }
    CHECK(cubic_local_count(0, 0, 4, 2) == 3);
  }

  TEST_CASE("n = 4 canonical enumeration") {
    int checked = 0;
    for (long a = -3; a <= 3; ++a)
      for (long c = -2; c <= 2; ++c) {
        ZPoly f = zpoly_of({0, a, 2 * c, 1});
        const mpz_class D = poly_disc(f);
        if (D == 0) continue;
        for (int64_t p : {3, 5, 7}) {
          const int v = padic_val(D, p);
          const int64_t k = orbit_count_local(f, p);
          CHECK(k >= 1);
          if (v <= 1) CHECK(k == 1);
          ++checked;
        }
      }
    CHECK(checked > 50);
  }

  TEST_CASE("single orbit when v_p(disc) <= 1") {
    for (auto c : std::vector<std::vector<long>>{{0, 1, 1}, {1, 2, 3}, {0, 3, 3}, {0, 0, 3}}) {
      ZPoly f = zpoly_of(c);
      for (int64_t p : {2, 3, 5, 7}) {
        if (padic_val(poly_disc(f), p) > 1) continue;
        CHECK(orbit_count_local(f, p) == 1);
      }
    }
    // exhaustive count mod 27 for v_3(disc) = 1
    int done = 0;
    for (long a = 0; a < 9 && done < 3; ++a)
      for (long b = 0; b < 9 && done < 3; ++b) {
        ZPoly f = zpoly_of({1, a, b});
        const mpz_class D = poly_disc(f);
        if (D == 0 || padic_val(D, 3) != 1) continue;
        CHECK(orbit_count_local_uf(f, 3, 3).lifting_orbits == 1);
        ++done;
      }
    CHECK(done == 3);
  }

  TEST_CASE("global count equals the number of integral canonical forms") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<long> u(-30, 30);
    int checked = 0, nontrivial = 0;
    while (checked < 300) {
      long a = u(rng), b = u(rng), c = u(rng);
      if (checked % 2 == 0) {
        // bias towards square factors in disc
        b = 4 * b;
        c = 8 * c;
        a = 2 * a;
      }
      ZPoly f = zpoly_of({a, b, c});
      if (poly_disc(f) == 0) continue;
      const int64_t g = orbit_count_global(f);
      CHECK(g == canonical_forms_over(a, b, c));
      nontrivial += g > 1;
      ++checked;
    }
    CHECK(nontrivial > 20);
  }

  TEST_CASE("families") {
    FamilySpec fam = FamilySpec::from_json(nlohmann::json::parse(
        R"({"n":3,"name":"t","conditions":[{"p":2,"j":1,"kind":"unit-lambda","residues":[]},{"p":3,"j":1,"kind":"inv-in","residues":[[1,0,0]]}]})"));
    CHECK_NOTHROW(fam.validate());
    CHECK(FamilySpec::from_json(fam.to_json()).to_json() == fam.to_json());
    CHECK(fam.primes() == std::vector<int64_t>{2, 3});
    CHECK(fam.admits_inv(3, {4, 3, -6}));
    CHECK_FALSE(fam.admits_inv(3, {0, 0, 0}));
    FamilySpec bad = FamilySpec::full(3);
    bad.conditions.push_back({3, 1, CondKind::InvIn, {{1, 0}}});
    CHECK_THROWS_AS(bad.validate(), LengthMismatch);
    // a single W0 point mod 3 is not a P-invariant set
    FamilySpec single = FamilySpec::full(3);
    single.conditions.push_back({3, 1, CondKind::Residues, {{1, 0, 0, 0, 0}}});
    CHECK_THROWS(single.validate());
    FamilySpec deep = FamilySpec::full(5);
    deep.conditions.push_back({5, 3, CondKind::InvIn, {{1, 0, 0, 0, 0}}});
    CHECK_THROWS_AS(local_lambda_integral(5, 5, deep, 1000000), LevelTooDeep);
  }

  TEST_CASE("family counts are at most full counts") {
    FamilySpec fam = FamilySpec::full(3);
    fam.conditions.push_back({2, 1, CondKind::UnitLambda, {}});
    for (auto c : std::vector<std::vector<long>>{{0, 0, 4}, {0, 0, 16}, {2, 4, 8}, {0, 12, 16}}) {
      ZPoly f = zpoly_of(c);
      CHECK(orbit_count_local_family(f, 2, fam) <= orbit_count_local(f, 2));
      CHECK(orbit_count_local_family(f, 2, fam) == cubic_local_count(c[0], c[1], c[2], 2, true));
    }
  }

  TEST_CASE("Jacobian constant") {
    auto a = jacobian_verify(3, 3);
    CHECK(a.measured == 1);
    CHECK(a.expected == 1);
    CHECK(jacobian_verify(3, 5).measured == 1);
    auto b = jacobian_verify(3, 2, 3);
    CHECK(b.measured == 1);
    CHECK(b.orbits == 2);
    auto c = jacobian_verify(4, 2, 2);
    CHECK(c.measured == 4);
    CHECK(c.orbits == 4);
    CHECK_THROWS(jacobian_verify(6, 3));
  }

  TEST_CASE("local factor JSON") {
    auto lf = local_lambda_integral(3, 2, FamilySpec::full(3));
    auto j = lf.to_json();
    CHECK(j["value"] == "2/3");
    CHECK(j["kind"] == "lambda_density");
  }
}
