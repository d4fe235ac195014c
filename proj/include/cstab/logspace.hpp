// The log cluster space: positive-point transitions, exp_L, fibers over
// positive points, tangent-space fans, the h-map, one-sided directional
// derivatives of exp_T, and the twistor-glue evaluator.
#pragma once

#include <complex>
#include <vector>

#include "cstab/tropical.hpp"

namespace cstab {

struct PositivePoint {
  int chart = 0;
  RatVec p;  // strictly positive multiplicative coordinates
};

struct LogPoint {
  PositivePoint x;
  TropicalPoint y;       // same chart as x
  double yscale = 1.0;   // angular coordinates are yscale * y.w
};

struct DegenerateJacobian : std::runtime_error {
  explicit DegenerateJacobian(const std::string& what) : std::runtime_error(what) {}
};
struct BranchCut : std::runtime_error {
  explicit BranchCut(const std::string& what) : std::runtime_error(what) {}
};

Rat ratPow(const Rat& base, long long e);

// Eq.-(9) transition restricted to positive points; exact, no poles.
RatVec positiveEdgeTransition(const ExchangeMatrix& B, int k, const RatVec& p);
RatVec positiveTransition(const ExchangeGraph& E, int s1, int s2, const RatVec& p);

// Jacobian of the additive-coordinate transition phi_R(s1,s2) at the point
// with multiplicative coordinates p (chart s1); exact rational.
QMat jacobianPath(const ExchangeGraph& E, int s1, int s2, const RatVec& p);

// Jacobian together with its directional derivative along the log-coordinate
// direction xi at the start chart.
void jacobianPathWithDeriv(const ExchangeGraph& E, int s1, int s2, const RatVec& p,
                           const RatVec& xi, QMat& jac, QMat& deriv);

// Chart with y in sigma^s, smallest id.
int admissibleChart(const ExchangeGraph& E, const TropicalPoint& y);

// exp_L evaluated through a given chart (must be admissible); the result is
// the chart-s torus representation.
std::vector<std::complex<double>> explAt(const ExchangeGraph& E, const LogPoint& q, int s);
// Convenience: pick the smallest admissible chart.
std::vector<std::complex<double>> expl(const ExchangeGraph& E, const LogPoint& q, int* chart = nullptr);

// Double-precision birational transition (for transporting torus data).
std::vector<std::complex<double>> xTransitionD(const ExchangeGraph& E, int s1, int s2,
                                               const std::vector<std::complex<double>>& w);

// All integer tropical points y with 2*pi*|y|_inf <= R, as LogPoints over x0.
std::vector<LogPoint> fiberOverPositive(const ExchangeGraph& E, const PositivePoint& x0,
                                        double R);

// Tangent fan at x: cones J(s)^{-1}(positive orthant), built exactly.
Fan tangentFan(const ExchangeGraph& E, const PositivePoint& x);

// Multiset of ray-incidence signatures; equal signatures mean isomorphic face
// lattices for complete simplicial fans indexed the same way.
std::vector<std::string> fanIncidenceSignature(const Fan& fan);

// h-map: the tangent vector at x (chart-of-x coordinates) corresponding to q.
RatVec hMapTangent(const ExchangeGraph& E, const LogPoint& q, int anchor = -1);

struct DirectionalResult {
  int chart = -1;                              // chart whose tangent cone contains u
  RatVec zetaRe, zetaIm;                       // exact derivative data at that chart
  std::vector<std::complex<double>> value;     // d(exp_T)(u) in chart-`chart` torus rep
};

// One-sided directional derivative of exp_T at h(q) along u = (du, dv) given
// in the chart of q.x.
DirectionalResult expDirectional(const ExchangeGraph& E, const LogPoint& q, const RatVec& du,
                                 const RatVec& dv);

// exp_T at an arbitrary tangent-bundle point given by chart-c data (positive
// coordinates p, fibre vector v), reported in torus chart outChart.
std::vector<std::complex<double>> expTangentEval(const ExchangeGraph& E, int c, const RatVec& p,
                                                 const RatVec& v, int outChart);

// Single-edge twistor gluing map at parameter eps (principal branch). Throws
// BranchCut when Im(w(k)/eps) leaves (-pi, pi).
std::vector<std::complex<double>> twistorGlueEdge(const ExchangeMatrix& B, int k,
                                                  std::complex<double> eps,
                                                  const std::vector<std::complex<double>>& w);

// Single-edge log gluing map (the eps = 1 specialisation, direct formula).
std::vector<std::complex<double>> logGlueEdge(const ExchangeMatrix& B, int k,
                                              const std::vector<std::complex<double>>& w);

}  // namespace cstab
