// The A_n polygon model: triangulations and flips, cross-ratio charts, point
// reconstruction, the Stokes-data ODE pipeline, the scaling action, and
// period integrals.
#pragma once

#include <complex>
#include <map>
#include <vector>

#include "cstab/quiver.hpp"
#include "cstab/rational.hpp"

namespace cstab {

using Cplx = std::complex<double>;

struct ArcNotPresent : std::runtime_error {
  explicit ArcNotPresent(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateQuadrilateral : std::runtime_error {
  explicit DegenerateQuadrilateral(const std::string& what) : std::runtime_error(what) {}
};
struct RadiusTooSmall : std::runtime_error {
  explicit RadiusTooSmall(const std::string& what) : std::runtime_error(what) {}
};
struct IntegratorFailure : std::runtime_error {
  explicit IntegratorFailure(const std::string& what) : std::runtime_error(what) {}
};
struct PathThroughRoot : std::runtime_error {
  explicit PathThroughRoot(const std::string& what) : std::runtime_error(what) {}
};

using Arc = std::pair<int, int>;  // vertex pair, first < second

struct Triangulation {
  int m = 0;
  std::vector<Arc> arcs;  // sorted, pairwise non-crossing, size m-3

  bool valid() const;
  int arcIndex(const Arc& a) const;  // -1 if absent
};

bool arcsCross(const Arc& a, const Arc& b);
Triangulation fanTriangulation(int m, int apex = 0);
Triangulation flipArc(const Triangulation& T, const Arc& a);
std::vector<std::array<int, 3>> faces(const Triangulation& T);
std::vector<Triangulation> enumerateTriangulations(int m);

ExchangeMatrix quiverOfTriangulation(const Triangulation& T);

// Flip graph with quiver data and arc-tracking edge bijections, packaged as
// an exchange graph for isomorphism checks. Seed G matrices are fillers: only
// B / adjacency / rho are meaningful here.
ExchangeGraph flipExchangeGraph(int m);

// Projective line points [a : b]; infinity = [1 : 0].
template <class C>
struct ProjPt {
  C a, b;
};

using PPq = ProjPt<QC>;
using PPd = ProjPt<Cplx>;

inline PPq ppOf(const QC& z) { return {z, QC(Rat(1))}; }
inline PPq ppInfinityQ() { return {QC(Rat(1)), QC(Rat(0))}; }
inline PPd ppOf(const Cplx& z) { return {z, Cplx(1.0)}; }
inline PPd ppInfinityD() { return {Cplx(1.0), Cplx(0.0)}; }

// Cross-ratio normalised by CR(inf, -1, 0, x) = x.
QC crossRatioQ(const PPq& p1, const PPq& p2, const PPq& p3, const PPq& p4);
Cplx crossRatioD(const PPd& p1, const PPd& p2, const PPd& p3, const PPd& p4);

// Labelled boundary points p : Z_m -> P^1.
using LabeledPointsQ = std::vector<PPq>;
using LabeledPointsD = std::vector<PPd>;

// Quadrilateral (a, b, c, d) of an arc in cyclic order starting at the lower
// arc endpoint.
std::array<int, 4> arcQuadrilateral(const Triangulation& T, const Arc& arc);

// One coordinate per arc, in the order of T.arcs.
QCVec crossRatioChart(const LabeledPointsQ& points, const Triangulation& T);
std::vector<Cplx> crossRatioChart(const LabeledPointsD& points, const Triangulation& T);

// PGL2 representative with the lexicographically least face pinned to
// (inf, -1, 0); exact inverse of crossRatioChart.
LabeledPointsQ reconstructPoints(const Triangulation& T, const QCVec& x);

// Membership in M_0 (consecutive points distinct, at least three values).
bool inM0(const LabeledPointsD& p, double tol = 1e-8);

struct ApexPolynomial {
  int n = 0;                  // rank; q is monic of degree n+1 with no x^n term
  std::vector<Cplx> coeffs;   // a_0 .. a_{n-1}

  int polygonSize() const { return n + 3; }
  Cplx eval(Cplx x) const;
  Cplx deriv(Cplx x) const;
};

struct StokesOptions {
  double rtol = 1e-10;
  double atol = 1e-28;
  double minWkbAction = 25.0;
  double hMin = 1e-13;
};

// Subdominant solution lines in the frame {y(0)=1,y'(0)=0; y(0)=0,y'(0)=1},
// one per Sibuya sector, indexed by j in Z_m.
LabeledPointsD stokesLines(const ApexPolynomial& q, double R, const StokesOptions& opts = {},
                           int jobs = 1);

// WKB action Re int_0^R sqrt(q) along the bisector of sector j (branch chosen
// so the value is the decay exponent; positive when R is adequate).
double wkbAction(const ApexPolynomial& q, double R, int j);

std::vector<Cplx> stokesToCluster(const LabeledPointsD& lines, const Triangulation& T);

// a_k -> e^{2 s (m-k-2)/m} a_k.
ApexPolynomial scalingAction(Cplx s, const ApexPolynomial& q);
// Z_m generator a_k -> omega^{k+2} a_k, omega = e^{2 pi i / m}.
ApexPolynomial zmAction(const ApexPolynomial& q);

// Discriminant via the Sylvester resultant of (q, q').
Cplx discriminant(const ApexPolynomial& q);

// Integral of sqrt(q) along the straight segment [z1, z2] between two simple
// roots, branch continuous from the midpoint (principal there).
Cplx periodIntegral(const ApexPolynomial& q, Cplx z1, Cplx z2, double tol = 1e-10);

// Apply a Moebius map [[A,B],[C,D]] to labelled points (frame changes in
// invariance tests).
LabeledPointsD applyMoebius(const LabeledPointsD& pts, Cplx A, Cplx B, Cplx C, Cplx D);

}  // namespace cstab
