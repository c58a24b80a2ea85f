#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "redorb/errors.hpp"
#include "redorb/poly.hpp"

using namespace redorb;

TEST_SUITE("exactmath") {
  TEST_CASE("discriminant examples") {
    CHECK(poly_disc(zpoly_of({0, 0, -1})) == -27);
    CHECK(poly_disc(zpoly_of({0, 1, 0})) == -4);
    for (int n = 3; n <= 7; ++n) CHECK(poly_disc(zpoly_of(std::vector<long>(n, 0))) == 0);
    CHECK(poly_disc(zpoly_of({0, 1, 1})) == -31);
  }

  TEST_CASE("discriminant matches naive Sylvester determinant on the small box") {
    for (int n = 3; n <= 5; ++n) {
      std::vector<long> c(n, -2);
      int checked = 0;
      while (true) {
        const mpz_class d = poly_disc(zpoly_of(c));
        const mpq_class want = oracle::disc_monic(c);
        REQUIRE(mpq_class(d) == want);
        ++checked;
        int i = 0;
        while (i < n && ++c[i] > 2) c[i++] = -2;
        if (i == n) break;
      }
      CHECK(checked == static_cast<int>(std::pow(5, n)));
    }
  }

  TEST_CASE("discriminant over Q and Z/m agrees with the integer value") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> u(-20, 20);
    for (int t = 0; t < 200; ++t) {
      const int n = 3 + t % 4;
      std::vector<long> c(n);
      for (auto& v : c) v = u(rng);
      const mpz_class d = poly_disc(zpoly_of(c));
      CHECK(poly_disc(qpoly_of(c)) == mpq_class(d));
      std::vector<Zm> cm;
      for (auto v : c) cm.emplace_back(v, 97);
      MonicPoly<Zm> fm(cm, RingTag::mod(97));
      mpz_class r = d % 97;
      if (r < 0) r += 97;
      CHECK(poly_disc(fm).v == r.get_si());
    }
  }

  TEST_CASE("Sturm examples") {
    CHECK(sturm_real_roots(zpoly_of({0, -1, 0})) == 3);
    CHECK(sturm_real_roots(zpoly_of({0, 1, 1})) == 1);
    CHECK(sturm_real_roots(zpoly_of({0, 0, 0, 1})) == 0);
    CHECK_THROWS_AS(sturm_real_roots(zpoly_of({0, 0, 0})), DegenerateInput);
  }

  TEST_CASE("Sturm count equals the critical-point root count") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> u(-9, 9);
    int done = 0;
    while (done < 1000) {
      const int n = 3 + done % 2;
      std::vector<long> c(n);
      for (auto& v : c) v = u(rng);
      if (poly_disc(zpoly_of(c)) == 0) continue;
      REQUIRE(sturm_real_roots(zpoly_of(c)) == oracle::count_real_roots(c));
      ++done;
    }
  }

  TEST_CASE("Sturm on float input converts exactly") {
    MonicPoly<double> f({0.0, -1.0, 0.0}, RingTag::reals());
    CHECK(sturm_real_roots(f) == 3);
    MonicPoly<double> g({0.5, 0.25, 0.125}, RingTag::reals());
    // (x + 1/2)(x^2 + 1/4)
    CHECK(sturm_real_roots(g) == 1);
  }

  TEST_CASE("p-adic valuation") {
    CHECK(padic_val(mpz_class(12), 2) == 2);
    CHECK(padic_val(mpz_class(12), 5) == 0);
    CHECK(padic_val(mpz_class(0), 3) == kPadicInfinity);
    CHECK(padic_val(mpq_class(3, 8), 2) == -3);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> u(1, 1000000);
    for (int t = 0; t < 1000; ++t) {
      const long p = std::vector<long>{2, 3, 5, 7}[t % 4];
      const mpz_class a = u(rng), b = u(rng);
      CHECK(padic_val(mpz_class(a * b), p) == padic_val(a, p) + padic_val(b, p));
    }
  }

  TEST_CASE("rings") {
    CHECK(RingTag::parse("IntegersMod(12)").m == 12);
    CHECK(RingTag::parse("PadicTrunc(3, 4)").m == 81);
    CHECK_THROWS_AS(RingTag::parse("Gaussian"), ParseError);
    mpq_class q(6, 4);
    q.canonicalize();
    CHECK(q.get_den() == 2);
    Zm a(-3, 10);
    CHECK(a.v == 7);
    CHECK((a * Zm(3, 10)).v == 1);
  }
}
