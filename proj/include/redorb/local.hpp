#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "redorb/interval.hpp"
#include "redorb/repcore.hpp"

namespace redorb {

enum class CondKind { Full, UnitLambda, InvIn, Residues };

struct FamilyCondition {
  int64_t p = 2;
  int j = 1;
  CondKind kind = CondKind::Full;
  // InvIn: (f_1..f_n) mod p^j.  Residues: W0 coordinates (w0_coords order) mod p^j.
  std::vector<std::vector<int64_t>> residues;
};

struct FamilySpec {
  int n = 3;
  std::string name = "full";
  std::vector<FamilyCondition> conditions;

  static FamilySpec full(int n);
  std::vector<int64_t> primes() const;  // conditioned primes, ascending
  std::vector<FamilyCondition> at(int64_t p) const;
  bool conditioned_at(int64_t p) const { return !at(p).empty(); }
  // B row-major over Z (any representatives)
  bool admits(int64_t p, const std::vector<int64_t>& B) const;
  // f_1..f_n over Z; only meaningful when every condition at p is Full or InvIn
  bool admits_inv(int64_t p, const std::vector<int64_t>& f) const;
  // throws Error on malformed or non-invariant conditions
  void validate() const;
  nlohmann::json to_json() const;
  static FamilySpec from_json(const nlohmann::json& j);
  uint64_t hash() const;  // FNV-1a of the canonical JSON dump
};

std::string cond_kind_str(CondKind k);
CondKind parse_cond_kind(const std::string& s);

enum class FactorKind { LambdaDensity, OrbitCountAvg, EulerZeta };
std::string factor_kind_str(FactorKind k);

struct LocalFactor {
  int n = 0;
  int64_t p = 0;
  mpq_class value;
  FactorKind kind = FactorKind::LambdaDensity;
  nlohmann::json to_json() const;
};

// exact integral of |lambda(B)|_p over the family's p-part of W0(Z_p)
LocalFactor local_lambda_integral(int n, int64_t p, const FamilySpec& fam, int64_t cap = 20000000);
// n = 3: integral over U(Z_p) of the family-restricted local orbit count
LocalFactor local_orbit_integral(int n, int64_t p, const FamilySpec& fam);
// the factor (1 - 1/p)^{-floor(n/2)} * lambda integral entering the Euler product
mpq_class euler_local_term(int n, int64_t p, const FamilySpec& fam);

// exponents a of the factors (1 - p^{-a})^{-1} of the zeta Euler factor
std::vector<int> zeta_exponents(int n);
mpq_class zeta_euler_factor(int n, int64_t p);

struct EulerIdentity {
  mpq_class lhs, rhs;
  bool equal = false;
};
EulerIdentity euler_factor_identity(int n, int64_t p);

// product over all primes: overrides[p] for listed p, the zeta factor elsewhere.
// Exact-ish fixed point product up to Q (default 20 * P_max), rigorous tail beyond.
Interval euler_product(int n, const std::map<int64_t, mpq_class>& overrides, int64_t P_max, int64_t Q = 0);

std::vector<int64_t> primes_upto(int64_t N);

// c_p(f); n = 3 closed form, otherwise canonical enumeration over Z_p
int64_t orbit_count_local(const ZPoly& f, int64_t p);
// family-restricted count (orbits inside the family's p-part)
int64_t orbit_count_local_family(const ZPoly& f, int64_t p, const FamilySpec& fam);

// cubic closed form on machine integers: sum over j of #{beta mod M_j : p^{2j} | f(beta), M'_j | f'(beta)}
// unit_only keeps only j = 0 (orbits with lambda a unit)
int64_t cubic_local_count(int64_t f1, int64_t f2, int64_t f3, int64_t p, bool unit_only = false);

// canonical representatives of the P(Z_p)-orbits in the fiber over f (slice entries p^e)
std::vector<SymMatrix<mpq_class>> local_canonical_reps(const ZPoly& f, int64_t p, size_t cap = 2000000);

// all B in W0(Z/p^k) with inv(B) = f mod p^k, row-major in [0, p^k)
std::vector<std::vector<int64_t>> fiber_mod(const ZPoly& f, int64_t p, int k, size_t cap = 20000000);

struct UFCount {
  int k = 0;
  int64_t fiber_size = 0;
  int64_t orbits = 0;
  int64_t lifting_orbits = 0;
};
// union-find over the mod p^k fiber under generator actions, with one-step lift check
UFCount orbit_count_local_uf(const ZPoly& f, int64_t p, int k, size_t cap = 20000000);
// levels k0 = 2 v_p(disc) + 2, k0 + 1, k0 + 2; StabilizationFailure if the lifting counts differ
int64_t orbit_count_local_stabilized(const ZPoly& f, int64_t p, size_t cap = 20000000);

struct JacobianResult {
  int n = 0;
  int64_t p = 0;
  int m = 1;
  int64_t sigma_count = 0;  // #Sigma-bar
  int64_t group_count = 0;  // #image of P(Z_p) mod p^m
  int64_t orbits = 0;       // P-orbits on Sigma-bar
  mpq_class vol_sigma, vol_P;
  mpq_class measured, expected;
};
JacobianResult jacobian_verify(int n, int64_t p, int m = 1);

}  // namespace redorb
