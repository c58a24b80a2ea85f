#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "redorb/repcore.hpp"

namespace redorb {

// Element of G(R).  Odd n: g in SO_A(R), mult = 1.  Even n: a similitude class
// (g, mult) with g A g^t = mult A, identified with (c g, c^2 mult) for units c.
// Acts on W by B -> mult^{-1} g B g^t.
template <class T>
struct GroupElem {
  int n = 0;
  RingTag ring;
  Mat<T> g;
  T mult;
  bool parabolic = false;

  bool sign_class() const { return n % 2 == 0; }
  bool operator==(const GroupElem& o) const { return n == o.n && g == o.g && mult == o.mult; }
  bool operator!=(const GroupElem& o) const { return !(*this == o); }
};

template <class T>
GroupElem<T> make_elem(Mat<T> g, T mult, RingTag ring);  // normalizes, checks membership
template <class T>
GroupElem<T> identity_elem(int n, RingTag ring);
template <class T>
GroupElem<T> compose(const GroupElem<T>& a, const GroupElem<T>& b);  // a*b
template <class T>
GroupElem<T> inverse(const GroupElem<T>& a);
template <class T>
bool is_member(const Mat<T>& g, const T& mult);
template <class T>
SymMatrix<T> act(const GroupElem<T>& g, const SymMatrix<T>& B);

// index set of the unipotent generators, 1-based (i, j)
std::vector<std::pair<int, int>> unipotent_indices(int n);
bool is_middle_row(int n, int i);
template <class T>
GroupElem<T> unipotent_gen(int n, int i, int j, const T& v, RingTag ring);

template <class T>
GroupElem<T> torus_elem(int n, const std::vector<T>& s, RingTag ring);
// diagonal t_1..t_n of Eqs. for real s (orthogonal normalization)
std::vector<double> torus_diag(int n, const std::vector<double>& s);
mpq_class haar_delta(int n, const std::vector<mpq_class>& s);
double haar_delta(int n, const std::vector<double>& s);

// diagonal +-1 elements of O_A(Z)
std::vector<GroupElem<mpz_class>> gamma_group_raw(int n);
std::vector<GroupElem<mpz_class>> gamma_group(int n);
// even n: diagonal +-1 similitudes with multiplier -1
std::vector<GroupElem<mpz_class>> gamma_negative(int n);

template <class T>
bool is_in_P(const GroupElem<T>& g);

template <class T>
GroupElem<T> random_P(int n, RingTag ring, long bound, uint64_t seed);

// all elements of P(Z/p) for prime p as matrices over Zm (torus x unipotent product)
std::vector<GroupElem<Zm>> enumerate_P_fp(int n, int64_t p);
// topological generators of P(Z_p) reduced mod p^k: torus unit generators and unipotents
std::vector<GroupElem<Zm>> P_generators_mod(int n, int64_t p, int k);
// image of P(Z_p) in the matrices mod q = p^k (closure of generators); returns elements
std::vector<GroupElem<Zm>> P_image_mod(int n, int64_t p, int k, size_t cap = 2000000);

template <class T, class U>
GroupElem<U> map_elem(const GroupElem<T>& g, RingTag ring, U (*fn)(const T&, const RingTag&));

}  // namespace redorb
