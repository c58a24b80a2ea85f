#include <doctest.h>

#include <cmath>

#include "redorb/archimedean.hpp"
#include "redorb/errors.hpp"
#include "redorb/local.hpp"
#include "redorb/repcore.hpp"

using namespace redorb;

namespace {

double d(const mpq_class& q) { return q.get_d(); }

// 19-digit reference value, +- one unit in the last place
Interval ref(const char* digits) {
  const mpq_class v(std::string(digits) + "/10000000000000000000"), ulp("1/10000000000000000000");
  return Interval(v - ulp, v + ulp);
}

}  // namespace

TEST_SUITE("archimedean") {
  TEST_CASE("zeta values") {
    auto Z2 = zeta_interval(2);
    CHECK(Z2.overlaps(ref("16449340668482264365")));
    CHECK(Z2.width() < mpq_class("1/1000000000000"));
    CHECK(zeta_interval(4).overlaps(ref("10823232337111381915")));
    CHECK(zeta_interval(3).overlaps(ref("12020569031595942854")));
    CHECK_THROWS(zeta_interval(1));
  }

  TEST_CASE("finite constants") {
    const double pi = 3.14159265358979323846;
    CHECK(d(constant_Cfin(3).mid()) == doctest::Approx(pi * pi / 6).epsilon(1e-12));
    CHECK(d(constant_Cfin(4).mid()) == doctest::Approx(std::pow(pi * pi / 6, 2)).epsilon(1e-12));
    for (int n = 3; n <= 6; ++n) CHECK(constant_Cfin_euler(n, 20000).overlaps(constant_Cfin(n)));
  }

  TEST_CASE("slice sums enclose the finite constant") {
    for (int n = 3; n <= 5; ++n) {
      auto S = slice_sum(n, 200);
      CHECK(S.full.overlaps(constant_Cfin(n)));
      CHECK(S.partial.hi <= S.full.hi);
      CHECK(S.tail_bound > 0);
      CHECK(S.tail_bound < mpq_class(1, 10));
    }
    // n = 3: sum_{b <= M} 1/b^2, tail between 1/(M+1) and 1/M
    auto S3 = slice_sum(3, 10);
    mpq_class h = 0;
    for (int b = 1; b <= 10; ++b) h += mpq_class(1, b * b);
    CHECK(S3.partial.contains(h));
    CHECK_THROWS(slice_sum(3, 0));
    auto T = tail_over_threshold(3, 100);
    CHECK(d(T.mid()) == doctest::Approx(0.01).epsilon(0.02));
  }

  TEST_CASE("volumes") {
    // the exact Sturm path for n >= 4 is slow, so fewer samples there
    const int64_t N = 200000;
    for (int n = 3; n <= 5; ++n) {
      double total = 0, hw = 0;
      for (int r = n % 2; r <= n; r += 2) {
        auto V = volume_Vr(n, r, n == 3 ? N : 10000, 7, 1);
        CHECK(V.hits > 0);
        total += V.estimate;
        hw += V.half_width;
      }
      CHECK(std::fabs(total - std::ldexp(1.0, n)) <= hw + 1e-9);
    }
    CHECK(volume_Vr(4, 0, 10000, 3, 1).estimate > 0);
    // degree 3: the r = 1 region dominates the box
    CHECK(volume_Vr(3, 1, N, 3, 1).estimate > volume_Vr(3, 3, N, 3, 1).estimate);
    CHECK_THROWS_AS(volume_Vr(3, 2, N, 1, 1), InvalidParity);
    CHECK_THROWS_AS(require_valid_r(4, 1), InvalidParity);
    CHECK_THROWS(volume_Vr(3, 1, 100, 1, 1));
  }

  TEST_CASE("determinism across thread counts") {
    auto a = volume_Vr(3, 3, 100000, 11, 1);
    auto b = volume_Vr(3, 3, 100000, 11, 3);
    CHECK(a.hits == b.hits);
    CHECK(a.estimate == b.estimate);
    CHECK(volume_Vr(3, 3, 100000, 12, 1).hits != a.hits);
    CHECK(counter_rng(1, 2, 3) == counter_rng(1, 2, 3));
    CHECK(counter_rng(1, 2, 3) != counter_rng(1, 2, 4));
  }

  TEST_CASE("infinite constant and prediction") {
    auto V = volume_Vr(4, 2, 10000, 5, 1);
    auto C = constant_Cinf(4, V);
    CHECK(d(C.mid()) == doctest::Approx(V.estimate / 4).epsilon(1e-9));
    auto V3 = volume_Vr(3, 1, 100000, 5, 1);
    auto C3 = constant_Cinf(3, V3);
    CHECK(d(C3.mid()) == doctest::Approx(V3.estimate).epsilon(1e-9));
    const Interval cf = constant_Cfin(3);
    auto p0 = predicted_count(3, cf, C3, 0);
    CHECK(p0.lo == 0);
    CHECK(p0.hi == 0);
    auto p5 = predicted_count(3, cf, C3, 5), p10 = predicted_count(3, cf, C3, 10);
    CHECK(p10.lo == p5.lo * 64);
    CHECK(p10.hi == p5.hi * 64);
    CHECK_THROWS(predicted_count(3, cf, C3, -1));
  }
}
