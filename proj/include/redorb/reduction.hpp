#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "redorb/group.hpp"

namespace redorb {

template <class T>
struct ReductionResult {
  GroupElem<T> g;
  SymMatrix<T> target;
  bool has_pattern = false;
  // odd n over Z/2^k: bit for each cleared column j of row floor(n/2), in column order
  std::vector<int> mod2_pattern;
  std::vector<int> pattern_columns;
};

// B in W0 over Q, Z/p, Z/p^k (or reals).  act(g, B) = target.
template <class T>
ReductionResult<T> reduce_over_field(const SymMatrix<T>& B);

// the sequence of (row k, generator (k+1, j'), target column) of the sweep
struct SweepStep {
  int row;
  int gi, gj;
  int col;
};
std::vector<SweepStep> sweep_steps(int n);

struct CanonicalOrbitRep {
  SymMatrix<mpz_class> B;
  std::vector<mpz_class> slice;
  GroupElem<mpz_class> g;  // act(g, input) = B
};

CanonicalOrbitRep canonical_form_Z(const SymMatrix<mpz_class>& B);
bool equivalent_Z(const SymMatrix<mpz_class>& B1, const SymMatrix<mpz_class>& B2);
// true iff B is its own canonical form (slice > 0 and swept entries in range)
bool is_canonical_Z(const SymMatrix<mpz_class>& B);

using IntKey = std::vector<int64_t>;  // row-major full matrix
IntKey key_of(const SymMatrix<mpz_class>& B);
SymMatrix<mpz_class> from_key(const IntKey& k, int n);

// BFS closure under integral generators inside the box |entry| <= bound
std::set<IntKey> orbit_bfs_oracle(const SymMatrix<mpz_class>& B, int64_t entry_bound, size_t cap = 5000000);
// BFS closure over Z/m under P(Z/m) generators
std::set<IntKey> orbit_bfs_oracle_mod(const SymMatrix<Zm>& B, size_t cap = 5000000);
std::vector<GroupElem<Zm>> stabilizer_fp(const SymMatrix<Zm>& B);

}  // namespace redorb
