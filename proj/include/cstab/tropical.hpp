// Tropical cones, the tropical fan with exact verification, the linear maps
// mu^sigma, quotient fans, the boundary map to the opposite space, and the
// duality check.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstab/quiver.hpp"

namespace cstab {

struct Cone {
  int chart = -1;          // vertex whose chart the generators live in
  int originVertex = -1;   // a for sigma = sigma^a, -1 for derived cones
  IMat gens;               // n x k, primitive integer generator columns
};

// sigma^a(s): generators are the tropical images of chart-a basis covectors.
Cone maximalCone(const ExchangeGraph& E, int a, int s);

// Unique sign kappa with kappa * w(i) >= 0 on the cone (cone must span enough
// of coordinate i to determine it, which maximal cones always do).
int tropicalSign(const Cone& cone, int i);
int tropicalSign(const ExchangeGraph& E, int a, int s, int i);

// Exact membership for simplicial cones.
bool coneContains(const Cone& cone, const RatVec& x);
bool coneContainsInterior(const Cone& cone, const RatVec& x);  // relative interior
std::optional<RatVec> coneCoordinates(const Cone& cone, const RatVec& x);

// Primitive ray columns and canonical keys.
std::vector<IVec> coneRays(const Cone& c);
std::string rayKeyOf(const IVec& v);
std::string coneKeyOf(const Cone& c);

// Exact certificate that c1 /\ c2 is the common face spanned by the shared
// rays (double-description based; cones must be simplicial and full rank).
bool coneIntersectionIsCommonFace(const Cone& c1, const Cone& c2, std::string* issue = nullptr);

// mu^{sigma^a}(s1,s2): composition of the single-edge sign-adjusted linear
// maps along the canonical path. Unimodular integer matrix.
IMat muLinear(const ExchangeGraph& E, int a, int s1, int s2);

struct FanCheck {
  bool distinct = true;
  bool intersectionsAreFaces = true;
  bool complete = true;
  std::vector<std::string> issues;
  bool ok() const { return distinct && intersectionsAreFaces && complete; }
};

struct Fan {
  int chart = -1;
  int dim = 0;
  std::vector<Cone> maximal;  // indexed by origin vertex id when built from a graph
};

Fan buildFan(const ExchangeGraph& E, int chart);

// Exact fan verification: pairwise intersections are common faces (double
// description certificate) and completeness (every facet shared by exactly
// one other maximal cone).
FanCheck verifyFan(const Fan& fan);

// Seeded random rational directions: each must lie in at least one maximal
// cone; any point in two cones must lie on the span of their shared rays.
FanCheck probeCompleteness(const Fan& fan, int samples, unsigned seed);

struct QuotientFan {
  QMat projection;          // (n-k) x n, kernel = span(tau)
  std::vector<Cone> cones;  // images of the maximal cones containing tau
  std::vector<int> originVertices;
};

// Quotient of the fan by the span of tau (tau given by generator columns in
// the fan's chart). Includes the fan-map check: the image of EVERY maximal
// cone must land inside some quotient cone.
QuotientFan quotientFan(const ExchangeGraph& E, const Fan& fan, const Cone& tau,
                        FanCheck* check = nullptr, bool verifyFanMapProperty = true);

struct TropicalPoint {
  int chart = 0;
  RatVec w;
};

// Lemma-"later" boundary homeomorphism: locate s with x in sigma^s and read
// the same coordinates in the opposite graph's chart s.
TropicalPoint boundaryMap(const ExchangeGraph& E, const TropicalPoint& x);

struct DualityReport {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// Checks mu-bar^{sigma-bar^{s1}}(s1,s2) == mu^{sigma^{s2}}(s1,s2) for all
// ordered pairs, and that the opposite fan's maximal cones equal
// mu^{sigma^a}(s,a)(positive orthant).
DualityReport checkDuality(const ExchangeGraph& E);

// Skew-form intertwining: M^T * Omega(s2) * M == Omega(s1) for the matrix of
// mu^{sigma}(s1,s2).
bool preservesSkewForm(const IMat& M, const IMat& omegaSrc, const IMat& omegaDst);

}  // namespace cstab
