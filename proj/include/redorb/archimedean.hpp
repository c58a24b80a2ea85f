#pragma once

#include <cstdint>

#include <json.hpp>

#include "redorb/interval.hpp"

namespace redorb {

// zeta(s), s >= 2, by Euler-Maclaurin with N head terms and J Bernoulli corrections
Interval zeta_interval(int s, int N = 24, int J = 12);

// C_n^fin as the product of zeta intervals / as the Euler product up to P_max with rigorous tail
Interval constant_Cfin(int n);
Interval constant_Cfin_euler(int n, int64_t P_max = 100000);

bool valid_r(int n, int r);
void require_valid_r(int n, int r);  // InvalidParity

struct VolumeEstimate {
  int n = 0;
  int r = 0;
  double estimate = 0;
  double half_width = 0;  // 99% normal-approximation half-width
  int64_t samples = 0;
  int64_t hits = 0;
  uint64_t seed = 0;
  nlohmann::json to_json() const;
};

// counter-based generator: 64 random bits for (seed, stream, counter)
uint64_t counter_rng(uint64_t seed, uint64_t stream, uint64_t counter);
int default_threads();  // REDORB_THREADS or hardware concurrency

VolumeEstimate volume_Vr(int n, int r, int64_t samples, uint64_t seed, int threads = 0);

Interval constant_Cinf(int n, const VolumeEstimate& V);
Interval predicted_count(int n, const Interval& Cfin, const Interval& Cinf, int64_t X);

struct SliceSum {
  Interval partial;  // sum over 1 <= b_i <= M
  mpq_class tail_bound;  // upper bound on the remainder
  Interval full;     // enclosure of the infinite sum
};
SliceSum slice_sum(int n, int64_t M);
// enclosure of the sum of 1/Z(b) over b with Z(b) >= M^2
Interval tail_over_threshold(int n, int64_t M);

}  // namespace redorb
