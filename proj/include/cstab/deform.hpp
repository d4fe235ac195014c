// Certifier for combinatorially constant families of cones: facet
// persistence, per-parameter fan validity and completeness, and the
// completeness-persistence certificate.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cstab/logspace.hpp"

namespace cstab {

struct NonInvertiblePhi : std::runtime_error {
  explicit NonInvertiblePhi(const std::string& what) : std::runtime_error(what) {}
};

// Rational cone given by generator columns (not necessarily primitive).
struct RCone {
  QMat gens;  // dim x k
};

using DMat = Mat<double>;

// Family matrix evaluator: exact where the family is closed-form rational,
// double otherwise (rotating-ray style families).
struct PhiFamily {
  std::function<std::optional<QMat>(const Rat&)> exact;
  std::function<DMat(double)> approx;
};

struct CCFamily {
  RCone base;
  PhiFamily phi;
  std::string name;
};

// Built-in families.
// The rotating-rays example: rays n_k(t) = e^{2 pi i k t}, cones
// sigma_k = cone(n_k, n_{k-1}) for k = 1..3; Phi_k(t) maps the base cone
// (at t0) onto the cone at t.
std::vector<CCFamily> rotatingRaysFamilies(const Rat& t0);

// The t-deformed chart-Jacobian family of an exchange graph at a positive
// point: for each vertex s, Phi_s(t) = J_s(t)^{-1} applied to the positive
// orthant, where J_s(t) is the Jacobian of the t-deformed transition from
// x.chart to s with weight vector m. Exact rational at rational t in (0,1];
// at t = 0 the cones close up to the opposite tropical fan.
std::vector<CCFamily> tangentJacobianFamilies(const ExchangeGraph& E, const PositivePoint& x,
                                              const IVec& m);

// The t-deformed positive transition and its Jacobian (used by the family
// builder and by tests).
RatVec positiveTransitionT(const ExchangeGraph& E, int s1, int s2, const RatVec& p, const Rat& t,
                           const IVec& m);
QMat jacobianPathT(const ExchangeGraph& E, int s1, int s2, const RatVec& p, const Rat& t,
                   const IVec& m);

struct FanAtVerdict {
  bool isFan = true;
  bool complete = true;
  std::vector<std::string> issues;
  bool ok() const { return isFan && complete; }
};

// Realize each family at parameter t and check fan axioms plus completeness.
// Exact families use the exact fan machinery; double families use the 2-d
// angular accounting with tolerance tol.
FanAtVerdict checkFanAt(const std::vector<CCFamily>& families, const Rat& t, double tol = 1e-9);

struct FacetPair {
  int i = -1, j = -1;
  // Facet generators pulled back into each family's base cone.
  QMat baseFacetI, baseFacetJ;
};

struct PersistenceVerdict {
  bool ok = true;
  std::vector<FacetPair> pairs;  // facet-sharing pairs found at t0
  // Earliest failure, if any.
  std::optional<Rat> failT;
  int failI = -1, failJ = -1;
  std::vector<std::string> issues;
};

PersistenceVerdict checkFacetPersistence(const std::vector<CCFamily>& families, const Rat& t0,
                                         const std::vector<Rat>& grid, double tol = 1e-10);

struct DeformReport {
  bool hypothesisFanAtT0 = false;
  PersistenceVerdict persistence;
  bool certified = false;
  std::vector<Rat> grid;
  std::vector<FanAtVerdict> perT;  // filled when hypotheses pass
  std::optional<Rat> firstBadT;
  std::vector<std::string> issues;
};

DeformReport certify(const std::vector<CCFamily>& families, const Rat& t0,
                     const std::vector<Rat>& grid, double tol = 1e-9);

std::vector<Rat> uniformGrid(int points);  // points >= 2, from 0 to 1

}  // namespace cstab
