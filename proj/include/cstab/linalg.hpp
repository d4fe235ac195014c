// Small dense exact linear algebra: integer and rational matrices, solving,
// inversion, and polyhedral-cone primitives (membership, extreme rays).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cstab/rational.hpp"

namespace cstab {

using IVec = std::vector<long long>;

// Row-major matrix over T. Kept deliberately simple; everything here runs at
// desk scale (n <= 9).
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::vector<T> col(int j) const {
    std::vector<T> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void setCol(int j, const std::vector<T>& v) {
    for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

using IMat = Mat<long long>;
using QMat = Mat<Rat>;

IMat imatMul(const IMat& x, const IMat& y);
IVec imatApply(const IMat& m, const IVec& v);
IMat imatTranspose(const IMat& m);
QMat toQ(const IMat& m);
IMat roundToI(const QMat& m);  // requires all entries integral

QMat qmatMul(const QMat& x, const QMat& y);
RatVec qmatApply(const QMat& m, const RatVec& v);
QMat qmatTranspose(const QMat& m);
Rat qmatDet(QMat m);
std::optional<QMat> qmatInverse(const QMat& m);
int qmatRank(QMat m);

// Solve m * x = b exactly; nullopt if inconsistent. m may be non-square
// (rows >= cols with full column rank expected for cone membership).
std::optional<RatVec> solveExact(const QMat& m, const RatVec& b);

// Nullspace basis (columns) of m, exact.
std::vector<RatVec> kernelBasis(const QMat& m);

// Divide an integer vector by the gcd of its entries (keeps direction).
IVec primitive(IVec v);
// Clear denominators of a rational vector and reduce to a primitive integer
// vector pointing the same way. Zero vector maps to zero.
IVec primitiveOfRational(const RatVec& v);

// Extreme rays of { x : h_i . x >= 0 } for a full-dimensional pointed cone,
// via the double description method. Rays are primitive integer vectors.
// Intended for small dimension (<= 5) and few constraints.
std::vector<IVec> extremeRays(const std::vector<RatVec>& halfspaces, int dim);

}  // namespace cstab
