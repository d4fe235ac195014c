#include "cstab/charts.hpp"

namespace cstab {

namespace {

void requireTorusPoint(const QCVec& w) {
  for (const auto& z : w)
    if (z.isZero()) throw PoleHit("zero coordinate: point not on the torus");
}

}  // namespace

QCVec xEdgeTransition(const ExchangeMatrix& B, int k, const QCVec& w) {
  if (k < 0 || k >= B.n) throw std::out_of_range("xEdgeTransition: index out of range");
  requireTorusPoint(w);
  QCVec out(B.n);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = QC(Rat(1)) / w[k];
      continue;
    }
    long long v = B.v(k, j);
    if (v == 0) {
      out[j] = w[j];
      continue;
    }
    QC factor = v >= 0 ? QC(Rat(1)) + w[k] : QC(Rat(1)) + QC(Rat(1)) / w[k];
    if (factor.isZero())
      throw PoleHit("transition pole: 1 + w(k)^{" + std::string(v >= 0 ? "+1" : "-1") +
                    "} vanishes");
    out[j] = w[j] * qcPow(factor, v);
  }
  return out;
}

QCVec xTransition(const ExchangeGraph& E, int s1, int s2, const QCVec& w) {
  QCVec cur = w;
  for (int eid : E.path(s1, s2)) {
    const GraphEdge& e = E.edges[eid];
    QCVec raw = xEdgeTransition(E.exchangeMatrixAt(e.src), e.k, cur);
    QCVec next(E.n);
    for (int j = 0; j < E.n; ++j) next[e.rho[j]] = raw[j];
    cur = std::move(next);
  }
  return cur;
}

QCVec monomialApply(const IMat& M, const QCVec& w) {
  QCVec out(M.rows, QC(Rat(1)));
  for (int j = 0; j < M.rows; ++j)
    for (int l = 0; l < M.cols; ++l)
      if (M(j, l) != 0) out[j] = out[j] * qcPow(w[l], M(j, l));
  return out;
}

long long skewPairing(const IMat& omega, const IVec& d, const IVec& n) {
  long long s = 0;
  for (int l = 0; l < omega.rows; ++l)
    for (int j = 0; j < omega.cols; ++j) s += d[l] * n[j] * omega(l, j);
  return s;
}

PsiEdgeData psiEdgeData(const ExchangeGraph& E, int a, int s1, int k) {
  IMat M = muLinear(E, a, a, s1);
  IVec d(E.n);
  for (int l = 0; l < E.n; ++l) d[l] = M(k, l);  // row k of M = M^T e_k
  int kappa = tropicalSign(E, a, s1, k);
  return {d, kappa, E.seeds[a].B};
}

QCVec psiEdgeApply(const PsiEdgeData& psi, const QCVec& w) {
  requireTorusPoint(w);
  int n = static_cast<int>(w.size());
  QC xd(Rat(1));
  for (int l = 0; l < n; ++l)
    if (psi.d[l] != 0) xd = xd * qcPow(w[l], psi.d[l]);
  QC core = QC(Rat(1)) + qcPow(xd, -psi.kappa);
  QCVec out(n);
  for (int j = 0; j < n; ++j) {
    IVec ej(n, 0);
    ej[j] = 1;
    long long e = skewPairing(psi.omegaA, psi.d, ej);
    if (e != 0 && core.isZero()) throw PoleHit("psi transition pole");
    out[j] = w[j] * qcPow(core, e);
  }
  return out;
}

long long exponentPositivity(const ExchangeGraph& E, int a, const IVec& m, int s1, int k) {
  if (tropicalSign(E, a, s1, k) != +1)
    throw std::invalid_argument("exponentPositivity: edge must be oriented with kappa = +1");
  for (long long mi : m)
    if (mi <= 0) throw std::invalid_argument("exponentPositivity: m must be strictly positive");
  long long val = imatApply(muLinear(E, a, a, s1), m)[k];
  if (val <= 0)
    throw NonPositiveExponent("m(d) = " + std::to_string(val) + " at vertex " +
                              std::to_string(s1) + ", edge " + std::to_string(k));
  return val;
}

QCVec phiTEdge(const ExchangeMatrix& B, int k, const QC& t, long long r, const QCVec& w) {
  if (r <= 0) throw std::invalid_argument("phiTEdge: r must be positive");
  requireTorusPoint(w);
  QC tr = qcPow(t, r);
  QCVec out(B.n);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = QC(Rat(1)) / w[k];
      continue;
    }
    long long v = B.v(k, j);
    if (v == 0) {
      out[j] = w[j];
      continue;
    }
    QC factor = v >= 0 ? tr + w[k] : QC(Rat(1)) + tr / w[k];
    if (factor.isZero()) throw PoleHit("t-deformed transition pole");
    out[j] = w[j] * qcPow(factor, v);
  }
  return out;
}

PoissonReport checkPoissonEdge(const ExchangeMatrix& B, int k, const std::vector<QCVec>& samples) {
  PoissonReport rep;
  int n = B.n;
  ExchangeMatrix Bp = mutateExchangeMatrix(B, k);
  for (size_t si = 0; si < samples.size(); ++si) {
    const QCVec& w = samples[si];
    QCVec f = xEdgeTransition(B, k, w);
    // Exact Jacobian J(a, j) = df_a / dw_j of the single-edge map.
    Mat<QC> J(n, n);
    for (int a = 0; a < n; ++a) {
      if (a == k) {
        J(a, k) = QC(Rat(-1)) / (w[k] * w[k]);
        continue;
      }
      long long v = B.v(k, a);
      if (v >= 0) {
        QC factor = QC(Rat(1)) + w[k];
        J(a, a) = qcPow(factor, v);
        if (v != 0) J(a, k) = w[a] * QC(Rat(v)) * qcPow(factor, v - 1);
      } else {
        QC factor = QC(Rat(1)) + QC(Rat(1)) / w[k];
        J(a, a) = qcPow(factor, v);
        J(a, k) = w[a] * QC(Rat(v)) * qcPow(factor, v - 1) * (QC(Rat(-1)) / (w[k] * w[k]));
      }
    }
    bool good = true;
    for (int a = 0; a < n && good; ++a)
      for (int b = 0; b < n && good; ++b) {
        QC lhs;
        for (int j = 0; j < n; ++j) {
          if (J(a, j).isZero()) continue;
          for (int l = 0; l < n; ++l) {
            if (B.v(j, l) == 0 || J(b, l).isZero()) continue;
            lhs += J(a, j) * J(b, l) * QC(Rat(B.v(j, l))) * w[j] * w[l];
          }
        }
        QC rhs = QC(Rat(Bp.v(a, b))) * f[a] * f[b];
        if (lhs != rhs) {
          good = false;
          rep.ok = false;
          rep.mismatches.push_back("sample " + std::to_string(si) + ": bracket (" +
                                   std::to_string(a) + "," + std::to_string(b) + ") mismatch");
        }
      }
  }
  return rep;
}

}  // namespace cstab
