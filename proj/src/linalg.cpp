#include "cstab/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace cstab {

Rat parseRat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("parseRat: zero denominator in '" + s + "'");
  return Rat(num, den);
}

std::string ratToString(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

QC qcPow(const QC& base, long e) {
  if (e == 0) return QC(Rat(1));
  QC b = base;
  long k = e;
  if (k < 0) {
    b = QC(Rat(1)) / b;
    k = -k;
  }
  QC out(Rat(1));
  while (k > 0) {
    if (k & 1) out = out * b;
    b = b * b;
    k >>= 1;
  }
  return out;
}

IMat imatMul(const IMat& x, const IMat& y) {
  IMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      long long xv = x(i, k);
      if (xv == 0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
    }
  return z;
}

IVec imatApply(const IMat& m, const IVec& v) {
  IVec out(m.rows, 0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
  return out;
}

IMat imatTranspose(const IMat& m) {
  IMat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

QMat toQ(const IMat& m) {
  QMat q(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
  return q;
}

IMat roundToI(const QMat& m) {
  IMat z(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) {
    if (denominator(m.a[i]) != 1) throw std::domain_error("roundToI: non-integer entry");
    z.a[i] = numerator(m.a[i]).convert_to<long long>();
  }
  return z;
}

QMat qmatMul(const QMat& x, const QMat& y) {
  QMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

RatVec qmatApply(const QMat& m, const RatVec& v) {
  RatVec out(m.rows, Rat(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m(i, j) != 0) out[i] += m(i, j) * v[j];
  return out;
}

QMat qmatTranspose(const QMat& m) {
  QMat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

Rat qmatDet(QMat m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: square matrix required");
  int n = m.rows;
  Rat det(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (m(r, c) != 0) { p = r; break; }
    if (p < 0) return Rat(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Rat inv = Rat(1) / m(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Rat f = m(r, c) * inv;
      for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

std::optional<QMat> qmatInverse(const QMat& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  QMat w = m, inv = QMat::identity(n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (w(r, c) != 0) { p = r; break; }
    if (p < 0) return std::nullopt;
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(w(p, j), w(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Rat piv = w(c, c);
    for (int j = 0; j < n; ++j) {
      w(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || w(r, c) == 0) continue;
      Rat f = w(r, c);
      for (int j = 0; j < n; ++j) {
        w(r, j) -= f * w(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

int qmatRank(QMat m) {
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int p = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m(r, c) != 0) { p = r; break; }
    if (p < 0) continue;
    if (p != rank)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(rank, j));
    Rat inv = Rat(1) / m(rank, c);
    for (int r = rank + 1; r < m.rows; ++r) {
      if (m(r, c) == 0) continue;
      Rat f = m(r, c) * inv;
      for (int j = c; j < m.cols; ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVec> solveExact(const QMat& m, const RatVec& b) {
  int R = m.rows, C = m.cols;
  QMat aug(R, C + 1);
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < C; ++j) aug(i, j) = m(i, j);
    aug(i, C) = b[i];
  }
  std::vector<int> pivotCol;
  int row = 0;
  for (int c = 0; c < C && row < R; ++c) {
    int p = -1;
    for (int r = row; r < R; ++r)
      if (aug(r, c) != 0) { p = r; break; }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j <= C; ++j) std::swap(aug(p, j), aug(row, j));
    Rat piv = aug(row, c);
    for (int j = c; j <= C; ++j) aug(row, j) /= piv;
    for (int r = 0; r < R; ++r) {
      if (r == row || aug(r, c) == 0) continue;
      Rat f = aug(r, c);
      for (int j = c; j <= C; ++j) aug(r, j) -= f * aug(row, j);
    }
    pivotCol.push_back(c);
    ++row;
  }
  for (int r = row; r < R; ++r)
    if (aug(r, C) != 0) return std::nullopt;
  RatVec x(C, Rat(0));
  for (size_t k = 0; k < pivotCol.size(); ++k) x[pivotCol[k]] = aug(static_cast<int>(k), C);
  return x;
}

std::vector<RatVec> kernelBasis(const QMat& m) {
  int R = m.rows, C = m.cols;
  QMat w = m;
  std::vector<int> pivotCol;
  int row = 0;
  for (int c = 0; c < C && row < R; ++c) {
    int p = -1;
    for (int r = row; r < R; ++r)
      if (w(r, c) != 0) { p = r; break; }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < C; ++j) std::swap(w(p, j), w(row, j));
    Rat piv = w(row, c);
    for (int j = c; j < C; ++j) w(row, j) /= piv;
    for (int r = 0; r < R; ++r) {
      if (r == row || w(r, c) == 0) continue;
      Rat f = w(r, c);
      for (int j = c; j < C; ++j) w(r, j) -= f * w(row, j);
    }
    pivotCol.push_back(c);
    ++row;
  }
  std::vector<bool> isPivot(C, false);
  for (int c : pivotCol) isPivot[c] = true;
  std::vector<RatVec> basis;
  for (int c = 0; c < C; ++c) {
    if (isPivot[c]) continue;
    RatVec v(C, Rat(0));
    v[c] = 1;
    for (size_t k = 0; k < pivotCol.size(); ++k) v[pivotCol[k]] = -w(static_cast<int>(k), c);
    basis.push_back(std::move(v));
  }
  return basis;
}

IVec primitive(IVec v) {
  long long g = 0;
  for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

IVec primitiveOfRational(const RatVec& v) {
  Int lcm = 1;
  for (const auto& r : v) {
    Int d = denominator(r);
    lcm = lcm / gcd(lcm, d) * d;
  }
  IVec out(v.size());
  Int g = 0;
  std::vector<Int> scaled(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    scaled[i] = numerator(v[i]) * (lcm / denominator(v[i]));
    g = gcd(g, abs(scaled[i]));
  }
  for (size_t i = 0; i < v.size(); ++i)
    out[i] = (g == 0 ? Int(0) : scaled[i] / g).convert_to<long long>();
  return out;
}

namespace {

Rat dot(const RatVec& a, const IVec& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A ray of the cone {h.x >= 0} is extreme iff its active constraint set has
// rank dim-1.
bool isExtreme(const IVec& ray, const std::vector<RatVec>& hs, int dim) {
  std::vector<RatVec> active;
  for (const auto& h : hs)
    if (dot(h, ray) == 0) active.push_back(h);
  if (static_cast<int>(active.size()) < dim - 1) return false;
  QMat m(static_cast<int>(active.size()), dim);
  for (size_t i = 0; i < active.size(); ++i)
    for (int j = 0; j < dim; ++j) m(static_cast<int>(i), j) = active[i][j];
  return qmatRank(m) == dim - 1;
}

}  // namespace

std::vector<IVec> extremeRays(const std::vector<RatVec>& halfspaces, int dim) {
  // Start from the full space expressed with 2*dim generators and cut one
  // halfspace at a time, combining positive/negative rays across the
  // hyperplane. Candidate rays are reduced to the extreme ones at the end.
  std::vector<RatVec> rays;
  for (int i = 0; i < dim; ++i) {
    RatVec e(dim, Rat(0)), f(dim, Rat(0));
    e[i] = 1;
    f[i] = -1;
    rays.push_back(e);
    rays.push_back(f);
  }
  auto dotR = [&](const RatVec& h, const RatVec& x) {
    Rat s(0);
    for (int i = 0; i < dim; ++i) s += h[i] * x[i];
    return s;
  };
  std::vector<RatVec> used;
  for (const auto& h : halfspaces) {
    std::vector<RatVec> keep;
    std::vector<std::pair<RatVec, Rat>> pos, neg;
    for (const auto& r : rays) {
      Rat v = dotR(h, r);
      if (v == 0)
        keep.push_back(r);
      else if (v > 0)
        pos.push_back({r, v});
      else
        neg.push_back({r, v});
    }
    for (const auto& [r, v] : pos) keep.push_back(r);
    for (const auto& [rp, vp] : pos)
      for (const auto& [rn, vn] : neg) {
        RatVec mix(dim);
        for (int i = 0; i < dim; ++i) mix[i] = vp * rn[i] - vn * rp[i];
        bool zero = true;
        for (const auto& x : mix)
          if (x != 0) { zero = false; break; }
        if (!zero) keep.push_back(std::move(mix));
      }
    rays = std::move(keep);
    used.push_back(h);
  }
  std::set<IVec> uniq;
  for (const auto& r : rays) {
    IVec p = primitiveOfRational(r);
    bool zero = true;
    for (long long x : p)
      if (x != 0) { zero = false; break; }
    if (!zero) uniq.insert(p);
  }
  std::vector<IVec> out;
  for (const auto& r : uniq)
    if (isExtreme(r, halfspaces, dim)) out.push_back(r);
  return out;
}

}  // namespace cstab
