// Exact birational transitions of the complex cluster space, psi-charts,
// the t-deformation to the torus, and Poisson compatibility checks.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstab/tropical.hpp"

namespace cstab {

struct PoleHit : std::runtime_error {
  explicit PoleHit(const std::string& what) : std::runtime_error(what) {}
};

// Single-edge birational transition, positional (slot j of the output holds
// coordinate rho(j) at the target). Throws PoleHit when the point leaves the
// domain of the map.
QCVec xEdgeTransition(const ExchangeMatrix& B, int k, const QCVec& w);

// Composite transition along the canonical path of the graph (applies rho).
QCVec xTransition(const ExchangeGraph& E, int s1, int s2, const QCVec& w);

// Monomial map of an integer matrix on the torus: out(j) = prod_k w(k)^M(j,k).
QCVec monomialApply(const IMat& M, const QCVec& w);

// Data of the single-edge psi-transition with base vertex a:
// psi*(x_n) = x_n (1 + x_d^{-kappa})^{<d,n>_a}.
struct PsiEdgeData {
  IVec d;        // mu^{sigma^a}(a,s1)^* (e_k), an exponent vector at a
  int kappa;     // tropical sign of the edge w.r.t. sigma^a
  IMat omegaA;   // skew form at a used for the pairing <d,n>_a
};

PsiEdgeData psiEdgeData(const ExchangeGraph& E, int a, int s1, int k);

// Evaluate psi(s1,s2) at a torus point of chart a (coordinates of the image
// point; slot-wise like the birational transitions).
QCVec psiEdgeApply(const PsiEdgeData& psi, const QCVec& w);

// Pairing <d, n>_a.
long long skewPairing(const IMat& omega, const IVec& d, const IVec& n);

struct NonPositiveExponent : std::runtime_error {
  explicit NonPositiveExponent(const std::string& what) : std::runtime_error(what) {}
};

// m(d) = mu^{sigma^a}(a,s1)(m)(k); throws NonPositiveExponent unless > 0.
// Edge is oriented so that kappa_sigma = +1 (callers pass the half-edge with
// positive tropical sign).
long long exponentPositivity(const ExchangeGraph& E, int a, const IVec& m, int s1, int k);

// Single-edge t-deformed transition, Eq.-(27)-style, for an edge with
// tropical sign +1 and exponent r = mu^{sigma^a}(a,s1)(m)(k) > 0.
QCVec phiTEdge(const ExchangeMatrix& B, int k, const QC& t, long long r, const QCVec& w);

struct PoissonReport {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// Verifies, exactly at each sample point, that the pushforward of the chart
// Poisson bracket under the single-edge map matches the target bracket:
// sum_{j,l} J(a,j) J(b,l) v_{jl} w_j w_l == v'_{ab} f_a f_b.
PoissonReport checkPoissonEdge(const ExchangeMatrix& B, int k, const std::vector<QCVec>& samples);

}  // namespace cstab
