#pragma once

#include <vector>

#include "redorb/ring.hpp"

namespace redorb {

// dense n x n matrix, 0-based storage
template <class T>
struct Mat {
  int n = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int dim, const T& fill) : n(dim), a(static_cast<size_t>(dim) * dim, fill) {}

  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  bool operator==(const Mat& o) const { return n == o.n && a == o.a; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  static Mat identity(int dim, const T& like) {
    Mat m(dim, cst(like, 0));
    for (int i = 0; i < dim; ++i) m(i, i) = cst(like, 1);
    return m;
  }
  static Mat antidiag(int dim, const T& like) {
    Mat m(dim, cst(like, 0));
    for (int i = 0; i < dim; ++i) m(i, dim - 1 - i) = cst(like, 1);
    return m;
  }

  Mat operator*(const Mat& o) const {
    Mat r(n, cst(a[0], 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (is_zero((*this)(i, k))) continue;
        for (int j = 0; j < n; ++j) r(i, j) += (*this)(i, k) * o(k, j);
      }
    return r;
  }
  Mat transpose() const {
    Mat r(n, cst(a[0], 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  Mat scaled(const T& s) const {
    Mat r = *this;
    for (auto& v : r.a) v = v * s;
    return r;
  }
};

template <class T, class U>
Mat<U> map_mat(const Mat<T>& m, U (*fn)(const T&)) {
  Mat<U> r;
  r.n = m.n;
  for (const auto& v : m.a) r.a.push_back(fn(v));
  return r;
}

}  // namespace redorb
