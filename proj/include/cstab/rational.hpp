// Exact rational and Gaussian-rational scalars used throughout the library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cstab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double toDouble(const Rat& r) { return r.convert_to<double>(); }

// Parse "p/q" or "p" (decimal integers, optional sign).
Rat parseRat(const std::string& s);
std::string ratToString(const Rat& r);

// Complex number with exact rational real/imaginary parts.
struct QC {
  Rat re, im;

  QC() = default;
  QC(Rat r) : re(std::move(r)) {}
  QC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  QC(long r) : re(r) {}

  bool isZero() const { return re == 0 && im == 0; }
  QC conj() const { return {re, -im}; }
  Rat norm2() const { return re * re + im * im; }

  QC operator-() const { return {-re, -im}; }
  QC& operator+=(const QC& o) { re += o.re; im += o.im; return *this; }
  QC& operator-=(const QC& o) { re -= o.re; im -= o.im; return *this; }

  friend QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
  friend QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
  friend QC operator*(const QC& a, const QC& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QC operator/(const QC& a, const QC& b) {
    Rat n = b.norm2();
    if (n == 0) throw std::domain_error("QC: division by zero");
    QC c = a * b.conj();
    return {c.re / n, c.im / n};
  }
  friend bool operator==(const QC& a, const QC& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QC& a, const QC& b) { return !(a == b); }
};

QC qcPow(const QC& base, long e);  // integer power, e may be negative
inline std::complex<double> toComplex(const QC& z) { return {toDouble(z.re), toDouble(z.im)}; }

using RatVec = std::vector<Rat>;
using QCVec = std::vector<QC>;

}  // namespace cstab
