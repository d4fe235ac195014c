// Cell decomposition of the cluster stability space, the varpi charts,
// transition linearity, the C-action flow, and the pi*i = DT check.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cstab/rng.hpp"
#include "cstab/tropical.hpp"

namespace cstab {

// A point of X_{R^t} x X_{R^t}; phi_S(chart) = x + i*y.
struct StabPoint {
  int chart = 0;
  RatVec x, y;
};

// Cell (sigma, tau): sigma = sigma^{sigma} (a vertex id), tau the face of
// sigma spanned by the coordinate directions in tauMask at that vertex's
// chart.
struct CellId {
  int sigma = -1;
  std::vector<int> tauMask;  // sorted coordinate positions spanning tau

  friend bool operator==(const CellId& a, const CellId& b) {
    return a.sigma == b.sigma && a.tauMask == b.tauMask;
  }
  friend bool operator!=(const CellId& a, const CellId& b) { return !(a == b); }
};

struct NotInDomain : std::runtime_error {
  explicit NotInDomain(const std::string& what) : std::runtime_error(what) {}
};
struct StuckAtBoundary : std::runtime_error {
  explicit StuckAtBoundary(const std::string& what) : std::runtime_error(what) {}
};
struct AmbiguousSnap : std::runtime_error {
  explicit AmbiguousSnap(const std::string& what) : std::runtime_error(what) {}
};

// Exact classification of p into its F(sigma,tau) cell; nullopt if p is not
// in the stability space. With allMatches set, every matching cell is
// appended (used by the partition test; the lemma guarantees at most one).
std::optional<CellId> classify(const ExchangeGraph& E, const StabPoint& p,
                               std::vector<CellId>* allMatches = nullptr);

bool inU(const ExchangeGraph& E, const CellId& cell, const StabPoint& p);

// varpi(sigma,tau) evaluated at p (exact Gaussian-rational output in the
// chart of cell.sigma). If chosenAnchor is non-null it receives the vertex a
// used; anchor -1 picks the smallest admissible one, otherwise the given
// anchor is used (it must be admissible).
QCVec varpiEval(const ExchangeGraph& E, const CellId& cell, const StabPoint& p,
                int anchor = -1, int* chosenAnchor = nullptr);

// All vertices a with tau <= sigma^a and y in sigma^a (valid anchors).
std::vector<int> varpiAnchors(const ExchangeGraph& E, const CellId& cell, const StabPoint& p);

// Linear transition between two varpi charts at a witness point.
IMat transitionMatrix(const ExchangeGraph& E, const CellId& cell1, const CellId& cell2,
                      const StabPoint& p);

// phi_S(s)(p) as exact complex rationals.
QCVec stabChartValue(const ExchangeGraph& E, int s, const StabPoint& p);

// Action of a graph automorphism on stability points (exact).
StabPoint autApplyStab(const ExchangeGraph& E, const GraphAutomorphism& g, const StabPoint& p);

// Single-edge semi-closed gluing map (the direct half-plane presentation);
// exact. Domain: the half-plane cases must be decidable, i.e. for every j
// either Re(w_k) != 0 or v_{kj} = 0; slot layout as xEdgeTransition.
QCVec stabEdgeGlue(const ExchangeMatrix& B, int k, const QCVec& w);

struct FlowOptions {
  double snapEps = 1e-9;          // snap-to-boundary band for reclassification
  double coincidenceTol = 1e-12;  // event-angle coincidence tolerance
  int maxEvents = 10000;
};

struct FlowResult {
  CellId cell;
  StabPoint point;                        // rationalized snapshot of the result
  std::vector<std::complex<double>> w;    // phi_S(cell.sigma) coordinates
  int events = 0;
};

// Flow of the Euler field for time r + i*theta. Negative theta is reduced to
// [0, pi) with powers of the DT element.
FlowResult stabFlow(const ExchangeGraph& E, const StabPoint& p, double r, double theta,
                    const FlowOptions& opts = {});

struct DtRotationReport {
  bool ok = true;
  int checked = 0;
  std::vector<std::string> mismatches;
};

// flow(p, i*pi) == T(p) on seeded samples: exact cell ids, coordinates within
// tol.
DtRotationReport checkDtRotation(const ExchangeGraph& E, const GraphAutomorphism& T,
                                 int samples, unsigned seed, double tol = 1e-9);

// Seeded random point of the stability space (classifiable by construction).
StabPoint randomStabPoint(const ExchangeGraph& E, Rng& rng);

}  // namespace cstab
