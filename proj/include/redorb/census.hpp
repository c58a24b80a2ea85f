#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "redorb/interval.hpp"
#include "redorb/local.hpp"

namespace redorb {

struct EnumStats {
  int64_t candidates = 0;  // box points
  int64_t emitted = 0;
  int64_t degenerate = 0;  // disc = 0
  int64_t parity_rejected = 0;
};

// all monic integer f with |f_i| < X^i, disc != 0, r real roots (r < 0: any), lexicographic in (f_1, ..., f_n)
EnumStats enumerate_invariants(int n, int64_t X, int r_filter, bool parity_filter, const std::function<void(const ZPoly&)>& emit);

// prime factorization of |N| (N != 0): trial division to 10^6, then Pollard rho within budget
std::map<mpz_class, int> factor_integer(const mpz_class& N, int64_t rho_budget = 2000000);

// number of P(Z)-orbits on the W0-fiber over f, as the product of local counts
int64_t orbit_count_global(const ZPoly& f);
int64_t orbit_count_global_family(const ZPoly& f, const FamilySpec& fam);

// primes p with p^2 | D (machine-integer path, D != 0)
std::vector<int64_t> square_divisor_primes(uint64_t D);

struct SweepRow {
  int64_t X = 0;
  int r = -1;
  int64_t empirical = 0;
  Interval predicted;
  double ratio = 0;
  int64_t anomalies = 0;
};

struct CensusConfig {
  int n = 3;
  int r = -1;  // -1: all strata
  std::vector<int64_t> sweep;  // X values; the report's X is the largest
  FamilySpec family = FamilySpec::full(3);
  int64_t samples = 2000000;
  uint64_t seed = 1;
  int64_t P_max = 10000;
  int threads = 0;
  nlohmann::json to_json() const;
  uint64_t hash() const;
};

struct CensusReport {
  int n = 0;
  int r = -1;
  int64_t X = 0;
  int64_t empirical = 0;
  Interval predicted;
  double ratio = 0;
  int64_t polynomials = 0;  // enumerated f in the stratum
  int64_t degenerate = 0;
  std::map<int64_t, int64_t> histogram;  // prod c_p value -> number of f
  std::vector<std::string> anomalies;
  std::vector<SweepRow> sweep;
  std::map<int, nlohmann::json> volumes;
  Interval cfin;
  uint64_t config_hash = 0;
  double wall_time = 0;  // not serialized
  nlohmann::json to_json() const;
  std::string to_csv() const;
  static CensusReport from_json(const nlohmann::json& j);
};

CensusReport census(const CensusConfig& cfg);

struct CrossCheck {
  int64_t method2 = 0;
  int64_t direct = 0;
  int64_t max_slice = 0;  // largest slice entry met in the direct enumeration
};
// n = 3: Method-II count vs direct enumeration of canonical forms with H(B) < X
CrossCheck cross_check_direct(int n, int64_t X);

}  // namespace redorb
