#pragma once

#include <utility>
#include <vector>

#include "redorb/matrix.hpp"
#include "redorb/poly.hpp"

namespace redorb {

// Symmetric matrix in W(R); 1-based accessors, full storage kept symmetric.
template <class T>
struct SymMatrix {
  int n = 0;
  RingTag ring;
  Mat<T> m;

  SymMatrix() = default;
  SymMatrix(int dim, RingTag r) : n(dim), ring(r), m(dim, ring_zero<T>(r)) {}
  SymMatrix(Mat<T> mat, RingTag r) : n(mat.n), ring(r), m(std::move(mat)) {}

  const T& b(int i, int j) const { return m(i - 1, j - 1); }
  void set(int i, int j, const T& v) {
    m(i - 1, j - 1) = v;
    m(j - 1, i - 1) = v;
  }
  bool symmetric() const { return m == m.transpose(); }
  // reducible hyperplane W0: b_ij = 0 whenever i + j < n
  bool in_W0() const {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; i + j < n; ++j)
        if (!is_zero(b(i, j))) return false;
    return true;
  }
  bool operator==(const SymMatrix& o) const { return n == o.n && m == o.m; }
  bool operator!=(const SymMatrix& o) const { return !(*this == o); }
};

template <class T>
void require_W0(const SymMatrix<T>& B) {
  if (!B.in_W0()) throw NotInW0("matrix has a nonzero entry with i + j < n");
}

// coordinates of W0: pairs (i, j), i <= j, i + j >= n, row-major
std::vector<std::pair<int, int>> w0_coords(int n);
int dim_w0(int n);

template <class T>
MonicPoly<T> inv(const SymMatrix<T>& B);
template <>
MonicPoly<mpz_class> inv(const SymMatrix<mpz_class>& B);
template <>
MonicPoly<mpq_class> inv(const SymMatrix<mpq_class>& B);
template <>
MonicPoly<Zm> inv(const SymMatrix<Zm>& B);
template <>
MonicPoly<double> inv(const SymMatrix<double>& B);

// integer fast path: B given row-major (n*n) with small entries; out = f_1..f_n
void inv_i64(const int64_t* B, int n, int64_t* out);

double height(const ZPoly& f);
double height(const QPoly& f);
double height(const MonicPoly<double>& f);
template <class T>
double height(const SymMatrix<T>& B) {
  return height(to_qpoly(inv(B)));
}
// exact predicate H(f) < X  <=>  |f_i| < X^i
bool height_below(const ZPoly& f, long X);

int num_slice(int n);  // floor(n/2)
// slice entries (b_{1,n-1}, ..., b_{g,n-g}) and for even n the centre b_{n/2,n/2} last
template <class T>
std::vector<T> slice_entries(const SymMatrix<T>& B) {
  std::vector<T> s;
  for (int i = 1; i <= num_slice(B.n); ++i) s.push_back(B.b(i, B.n - i));
  return s;
}
// exponents of lambda on the slice entries
std::vector<int> lambda_exponents(int n);
// exponents of Z on the slice entries
std::vector<int> zpoly_exponents(int n);

template <class T>
T lambda(const SymMatrix<T>& B);
template <class T>
T zpoly(int n, const std::vector<T>& b);
template <class T>
T zpoly(const SymMatrix<T>& B) {
  return zpoly(B.n, slice_entries(B));
}

// position (i, j), 1-based, of the entry of sigma0 carrying f_k, k = 1..n
std::vector<std::pair<int, int>> sigma0_positions(int n);
// hard-coded calibrated sign vectors (n <= 8); see calibrate_sigma0_signs
std::vector<int> sigma0_signs(int n);
std::vector<int> calibrate_sigma0_signs(int n, unsigned seed = 1);

template <class T>
SymMatrix<T> sigma0(const MonicPoly<T>& f);
template <class T>
SymMatrix<T> sigma0_with_signs(const MonicPoly<T>& f, const std::vector<int>& eps);

SymMatrix<double> sigma(const MonicPoly<double>& f);

struct Stratum {
  int n = 0;
  int r = 0;
};
Stratum stratify(const ZPoly& f);
Stratum stratify(const MonicPoly<double>& f);
bool in_U_r(const ZPoly& f, int r);

}  // namespace redorb
