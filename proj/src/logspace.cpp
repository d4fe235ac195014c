#include "cstab/logspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cstab {

Rat ratPow(const Rat& base, long long e) {
  if (e == 0) return Rat(1);
  Rat b = base;
  long long k = e;
  if (k < 0) {
    if (b == 0) throw std::domain_error("ratPow: zero base with negative exponent");
    b = Rat(1) / b;
    k = -k;
  }
  Rat out(1);
  while (k > 0) {
    if (k & 1) out *= b;
    b *= b;
    k >>= 1;
  }
  return out;
}

RatVec positiveEdgeTransition(const ExchangeMatrix& B, int k, const RatVec& p) {
  for (const auto& v : p)
    if (v <= 0) throw std::domain_error("positiveEdgeTransition: point not positive");
  RatVec out(B.n);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = Rat(1) / p[k];
      continue;
    }
    long long v = B.v(k, j);
    if (v == 0)
      out[j] = p[j];
    else if (v > 0)
      out[j] = p[j] * ratPow(Rat(1) + p[k], v);
    else
      out[j] = p[j] * ratPow(Rat(1) + Rat(1) / p[k], v);
  }
  return out;
}

RatVec positiveTransition(const ExchangeGraph& E, int s1, int s2, const RatVec& p) {
  RatVec cur = p;
  for (int eid : E.path(s1, s2)) {
    const GraphEdge& e = E.edges[eid];
    RatVec raw = positiveEdgeTransition(E.exchangeMatrixAt(e.src), e.k, cur);
    RatVec next(E.n);
    for (int j = 0; j < E.n; ++j) next[e.rho[j]] = raw[j];
    cur = std::move(next);
  }
  return cur;
}

namespace {

// Jacobian of the single-edge additive transition at multiplicative point p,
// rows already permuted by rho.
QMat edgeJacobian(const ExchangeGraph& E, int eid, const RatVec& p) {
  const GraphEdge& e = E.edges[eid];
  const IMat& B = E.seeds[e.src].B;
  int n = E.n;
  QMat J(n, n);
  for (int j = 0; j < n; ++j) {
    if (j == e.k) {
      J(e.rho[j], e.k) = Rat(-1);
      continue;
    }
    J(e.rho[j], j) = Rat(1);
    long long v = B(e.k, j);
    if (v > 0)
      J(e.rho[j], e.k) = Rat(v) * p[e.k] / (Rat(1) + p[e.k]);
    else if (v < 0)
      J(e.rho[j], e.k) = Rat(-v) / (Rat(1) + p[e.k]);
  }
  return J;
}

// d/dt of edgeJacobian along a log-coordinate direction delta at the source
// vertex: only the column of the mutated coordinate moves.
QMat edgeJacobianDeriv(const ExchangeGraph& E, int eid, const RatVec& p, const RatVec& delta) {
  const GraphEdge& e = E.edges[eid];
  const IMat& B = E.seeds[e.src].B;
  int n = E.n;
  QMat D(n, n);
  Rat denom = (Rat(1) + p[e.k]) * (Rat(1) + p[e.k]);
  Rat common = p[e.k] / denom * delta[e.k];
  for (int j = 0; j < n; ++j) {
    if (j == e.k) continue;
    long long v = B(e.k, j);
    if (v != 0) D(e.rho[j], e.k) = Rat(v) * common;
  }
  return D;
}

}  // namespace

QMat jacobianPath(const ExchangeGraph& E, int s1, int s2, const RatVec& p) {
  QMat J = QMat::identity(E.n);
  RatVec cur = p;
  for (int eid : E.path(s1, s2)) {
    J = qmatMul(edgeJacobian(E, eid, cur), J);
    const GraphEdge& e = E.edges[eid];
    RatVec raw = positiveEdgeTransition(E.exchangeMatrixAt(e.src), e.k, cur);
    RatVec next(E.n);
    for (int j = 0; j < E.n; ++j) next[e.rho[j]] = raw[j];
    cur = std::move(next);
  }
  return J;
}

void jacobianPathWithDeriv(const ExchangeGraph& E, int s1, int s2, const RatVec& p,
                           const RatVec& xi, QMat& jac, QMat& deriv) {
  int n = E.n;
  jac = QMat::identity(n);
  deriv = QMat(n, n);
  RatVec cur = p;
  for (int eid : E.path(s1, s2)) {
    RatVec delta = qmatApply(jac, xi);  // pushed direction at the current vertex
    QMat A = edgeJacobian(E, eid, cur);
    QMat DA = edgeJacobianDeriv(E, eid, cur, delta);
    deriv = qmatMul(A, deriv);
    QMat corr = qmatMul(DA, jac);
    for (size_t i = 0; i < deriv.a.size(); ++i) deriv.a[i] += corr.a[i];
    jac = qmatMul(A, jac);
    const GraphEdge& e = E.edges[eid];
    RatVec raw = positiveEdgeTransition(E.exchangeMatrixAt(e.src), e.k, cur);
    RatVec next(n);
    for (int j = 0; j < n; ++j) next[e.rho[j]] = raw[j];
    cur = std::move(next);
  }
}

int admissibleChart(const ExchangeGraph& E, const TropicalPoint& y) {
  for (int s = 0; s < E.vertexCount(); ++s) {
    RatVec w = E.tropicalTransition(y.chart, s, y.w);
    bool ok = true;
    for (const auto& v : w)
      if (v < 0) { ok = false; break; }
    if (ok) return s;
  }
  throw std::domain_error("admissibleChart: tropical fan does not cover y");
}

std::vector<std::complex<double>> explAt(const ExchangeGraph& E, const LogPoint& q, int s) {
  RatVec ps = positiveTransition(E, q.x.chart, s, q.x.p);
  RatVec vs = E.tropicalTransition(q.y.chart, s, q.y.w);
  std::vector<std::complex<double>> out(E.n);
  for (int j = 0; j < E.n; ++j) {
    double angle = q.yscale * toDouble(vs[j]);
    out[j] = toDouble(ps[j]) * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return out;
}

std::vector<std::complex<double>> expl(const ExchangeGraph& E, const LogPoint& q, int* chart) {
  int s = admissibleChart(E, q.y);
  if (chart) *chart = s;
  return explAt(E, q, s);
}

std::vector<std::complex<double>> xTransitionD(const ExchangeGraph& E, int s1, int s2,
                                               const std::vector<std::complex<double>>& w) {
  std::vector<std::complex<double>> cur = w;
  for (int eid : E.path(s1, s2)) {
    const GraphEdge& e = E.edges[eid];
    const IMat& B = E.seeds[e.src].B;
    std::vector<std::complex<double>> raw(E.n);
    for (int j = 0; j < E.n; ++j) {
      if (j == e.k) {
        raw[j] = 1.0 / cur[e.k];
        continue;
      }
      long long v = B(e.k, j);
      if (v == 0) {
        raw[j] = cur[j];
        continue;
      }
      std::complex<double> factor = v > 0 ? 1.0 + cur[e.k] : 1.0 + 1.0 / cur[e.k];
      raw[j] = cur[j] * std::pow(factor, static_cast<double>(v));
    }
    std::vector<std::complex<double>> next(E.n);
    for (int j = 0; j < E.n; ++j) next[e.rho[j]] = raw[j];
    cur = std::move(next);
  }
  return cur;
}

std::vector<LogPoint> fiberOverPositive(const ExchangeGraph& E, const PositivePoint& x0,
                                        double R) {
  constexpr double kTwoPi = 6.283185307179586476925;
  int K = static_cast<int>(std::floor(R / kTwoPi + 1e-9));
  if (K < 0) K = 0;
  std::vector<LogPoint> out;
  std::vector<int> z(E.n, -K);
  while (true) {
    TropicalPoint y{x0.chart, RatVec(E.n)};
    for (int i = 0; i < E.n; ++i) y.w[i] = Rat(z[i]);
    out.push_back(LogPoint{x0, y, kTwoPi});
    int i = 0;
    while (i < E.n && z[i] == K) {
      z[i] = -K;
      ++i;
    }
    if (i == E.n) break;
    ++z[i];
  }
  return out;
}

Fan tangentFan(const ExchangeGraph& E, const PositivePoint& x) {
  Fan fan;
  fan.chart = x.chart;
  fan.dim = E.n;
  for (int s = 0; s < E.vertexCount(); ++s) {
    QMat J = jacobianPath(E, x.chart, s, x.p);
    auto inv = qmatInverse(J);
    if (!inv) throw DegenerateJacobian("tangentFan: chart Jacobian is singular at vertex " +
                                       std::to_string(s));
    Cone c{x.chart, s, IMat(E.n, E.n)};
    for (int j = 0; j < E.n; ++j) {
      RatVec col(E.n);
      for (int i = 0; i < E.n; ++i) col[i] = (*inv)(i, j);
      c.gens.setCol(j, primitiveOfRational(col));
    }
    fan.maximal.push_back(std::move(c));
  }
  return fan;
}

std::vector<std::string> fanIncidenceSignature(const Fan& fan) {
  std::map<std::string, std::set<int>> incidence;
  for (size_t c = 0; c < fan.maximal.size(); ++c) {
    const Cone& cone = fan.maximal[c];
    for (int j = 0; j < cone.gens.cols; ++j) {
      std::ostringstream os;
      for (auto v : primitive(cone.gens.col(j))) os << v << ',';
      incidence[os.str()].insert(static_cast<int>(c));
    }
  }
  std::vector<std::string> sig;
  for (const auto& [ray, cones] : incidence) {
    std::ostringstream os;
    for (int c : cones) os << c << ',';
    sig.push_back(os.str());
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

RatVec hMapTangent(const ExchangeGraph& E, const LogPoint& q, int anchor) {
  int a = anchor >= 0 ? anchor : admissibleChart(E, q.y);
  RatVec va = E.tropicalTransition(q.y.chart, a, q.y.w);
  for (const auto& v : va)
    if (v < 0) throw std::domain_error("hMapTangent: anchor chart not admissible");
  RatVec pa = positiveTransition(E, q.x.chart, a, q.x.p);
  QMat J = jacobianPath(E, a, q.x.chart, pa);
  return qmatApply(J, va);
}

DirectionalResult expDirectional(const ExchangeGraph& E, const LogPoint& q, const RatVec& du,
                                 const RatVec& dv) {
  int c = q.x.chart;
  RatVec vc = hMapTangent(E, q);
  DirectionalResult res;
  for (int s = 0; s < E.vertexCount(); ++s) {
    QMat J, K;
    jacobianPathWithDeriv(E, c, s, q.x.p, du, J, K);
    RatVec vs = qmatApply(J, vc);
    bool inCone = true;
    for (const auto& v : vs)
      if (v < 0) { inCone = false; break; }
    if (!inCone) continue;
    RatVec zetaRe = qmatApply(J, du);
    RatVec zetaIm = qmatApply(J, dv);
    RatVec corr = qmatApply(K, vc);
    for (int i = 0; i < E.n; ++i) zetaIm[i] += corr[i];
    // Tangent-cone condition: on boundary coordinates the imaginary part of
    // the pushed direction must point inward.
    bool dirOk = true;
    for (int i = 0; i < E.n; ++i)
      if (vs[i] == 0 && zetaIm[i] < 0) { dirOk = false; break; }
    if (!dirOk) continue;
    RatVec ps = positiveTransition(E, c, s, q.x.p);
    res.chart = s;
    res.zetaRe = zetaRe;
    res.zetaIm = zetaIm;
    res.value.resize(E.n);
    for (int i = 0; i < E.n; ++i) {
      double angle = toDouble(vs[i]);
      std::complex<double> w = toDouble(ps[i]) * std::complex<double>(std::cos(angle), std::sin(angle));
      res.value[i] = w * std::complex<double>(toDouble(zetaRe[i]), toDouble(zetaIm[i]));
    }
    return res;
  }
  throw std::domain_error("expDirectional: direction not covered by any tangent cone");
}

std::vector<std::complex<double>> expTangentEval(const ExchangeGraph& E, int c, const RatVec& p,
                                                 const RatVec& v, int outChart) {
  // Find a chart with nonnegative fibre coordinates (tiny negatives snapped).
  const Rat snap = Rat(1, 1000000000000LL);
  for (int s = 0; s < E.vertexCount(); ++s) {
    QMat J = jacobianPath(E, c, s, p);
    RatVec vs = qmatApply(J, v);
    bool ok = true;
    for (auto& val : vs) {
      if (val < 0 && -val <= snap) val = 0;
      if (val < 0) { ok = false; break; }
    }
    if (!ok) continue;
    RatVec ps = positiveTransition(E, c, s, p);
    std::vector<std::complex<double>> out(E.n);
    for (int i = 0; i < E.n; ++i) {
      double angle = toDouble(vs[i]);
      out[i] = toDouble(ps[i]) * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return xTransitionD(E, s, outChart, out);
  }
  throw std::domain_error("expTangentEval: point not covered by any tangent cone");
}

namespace {

// Principal Log(1 + e^z), stable for large |Re z|.
std::complex<double> logOnePlusExp(std::complex<double> z) {
  if (z.real() > 30.0) return z + std::log(1.0 + std::exp(-z));
  if (z.real() < -30.0) {
    std::complex<double> ez = std::exp(z);
    return ez - 0.5 * ez * ez;  // log1p to second order; |ez| < 1e-13
  }
  return std::log(1.0 + std::exp(z));
}

}  // namespace

std::vector<std::complex<double>> twistorGlueEdge(const ExchangeMatrix& B, int k,
                                                  std::complex<double> eps,
                                                  const std::vector<std::complex<double>>& w) {
  if (eps == std::complex<double>(0.0, 0.0))
    throw std::invalid_argument("twistorGlueEdge: eps must be nonzero");
  constexpr double kPi = 3.14159265358979323846;
  std::complex<double> zk = w[k] / eps;
  if (std::fabs(zk.imag()) >= kPi)
    throw BranchCut("twistorGlueEdge: Im(w(k)/eps) leaves the principal strip");
  std::vector<std::complex<double>> out(B.n);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = -w[k];
      continue;
    }
    long long v = B.v(k, j);
    if (v == 0) {
      out[j] = w[j];
      continue;
    }
    std::complex<double> term =
        v > 0 ? logOnePlusExp(zk) : logOnePlusExp(-zk);
    out[j] = w[j] + eps * static_cast<double>(v) * term;
  }
  return out;
}

std::vector<std::complex<double>> logGlueEdge(const ExchangeMatrix& B, int k,
                                              const std::vector<std::complex<double>>& w) {
  std::vector<std::complex<double>> out(B.n);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = -w[k];
      continue;
    }
    long long v = B.v(k, j);
    if (v == 0) {
      out[j] = w[j];
      continue;
    }
    std::complex<double> term = v > 0 ? std::log(1.0 + std::exp(w[k])) : std::log(1.0 + std::exp(-w[k]));
    out[j] = w[j] + static_cast<double>(v) * term;
  }
  return out;
}

}  // namespace cstab
