#include "cstab/deform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cstab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

QMat applyPhi(const QMat& phi, const QMat& gens) { return qmatMul(phi, gens); }

DMat dmatMul(const DMat& x, const DMat& y) {
  DMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k)
      for (int j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
  return z;
}

Cone toCone(const QMat& gens) {
  Cone c{0, -1, IMat(gens.rows, gens.cols)};
  for (int j = 0; j < gens.cols; ++j) {
    RatVec col(gens.rows);
    for (int i = 0; i < gens.rows; ++i) col[i] = gens(i, j);
    c.gens.setCol(j, primitiveOfRational(col));
  }
  return c;
}

struct RealizedExact {
  std::vector<Cone> cones;
  bool available = false;
};

RealizedExact realizeExact(const std::vector<CCFamily>& families, const Rat& t) {
  RealizedExact out;
  out.available = true;
  for (const auto& f : families) {
    auto phi = f.phi.exact ? f.phi.exact(t) : std::nullopt;
    if (!phi) {
      out.available = false;
      out.cones.clear();
      return out;
    }
    if (qmatDet(*phi) == 0) throw NonInvertiblePhi("Phi(t) singular for family " + f.name);
    out.cones.push_back(toCone(applyPhi(*phi, f.base.gens)));
  }
  return out;
}

struct Ang {
  double lo, hi;  // cone = angles in [lo, hi], hi - lo in (0, pi)
};

double rayAngle(double x, double y) {
  double a = std::atan2(y, x);
  if (a < 0) a += kTwoPi;
  return a;
}

// 2-d double realization as angular intervals.
std::vector<Ang> realizeAngular(const std::vector<CCFamily>& families, double t, double tol) {
  std::vector<Ang> out;
  for (const auto& f : families) {
    DMat phi = f.phi.approx(t);
    if (phi.rows != 2) throw std::invalid_argument("angular realization needs dimension 2");
    double det = phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0);
    if (std::fabs(det) < tol) throw NonInvertiblePhi("Phi(t) singular for family " + f.name);
    DMat base(2, f.base.gens.cols);
    for (int j = 0; j < f.base.gens.cols; ++j)
      for (int i = 0; i < 2; ++i) base(i, j) = toDouble(f.base.gens(i, j));
    DMat g = dmatMul(phi, base);
    double a0 = rayAngle(g(0, 0), g(1, 0));
    double a1 = rayAngle(g(0, 1), g(1, 1));
    // Orient so the cone is swept counterclockwise from lo by < pi.
    double diff = a1 - a0;
    while (diff < 0) diff += kTwoPi;
    if (diff < kTwoPi / 2) {
      out.push_back({a0, a0 + diff});
    } else {
      diff = kTwoPi - diff;
      out.push_back({a1, a1 + diff});
    }
  }
  return out;
}

}  // namespace

std::vector<CCFamily> rotatingRaysFamilies(const Rat& t0) {
  std::vector<CCFamily> out;
  double t0d = toDouble(t0);
  for (int k = 1; k <= 3; ++k) {
    CCFamily f;
    f.name = "sigma" + std::to_string(k);
    // Base cone at t0 held as the identity-parameter data; Phi(t) maps the
    // pair of rays at t0 to the pair at t. Everything is double-valued.
    f.base.gens = QMat(2, 2);
    // Base generators: unit square stand-ins; Phi absorbs the geometry by
    // mapping e1 -> n_k(t), e2 -> n_{k-1}(t).
    f.base.gens(0, 0) = 1;
    f.base.gens(1, 1) = 1;
    f.phi.exact = nullptr;
    f.phi.approx = [k, t0d](double t) {
      (void)t0d;
      DMat m(2, 2);
      m(0, 0) = std::cos(kTwoPi * k * t);
      m(1, 0) = std::sin(kTwoPi * k * t);
      m(0, 1) = std::cos(kTwoPi * (k - 1) * t);
      m(1, 1) = std::sin(kTwoPi * (k - 1) * t);
      return m;
    };
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

// Forward t-deformed crossing of an edge with kappa = +1, raw slots.
RatVec tEdgeForward(const IMat& B, int k, const RatVec& p, const Rat& tr) {
  int n = B.rows;
  RatVec out(n);
  for (int j = 0; j < n; ++j) {
    if (j == k) {
      out[j] = Rat(1) / p[k];
      continue;
    }
    long long v = B(k, j);
    if (v == 0)
      out[j] = p[j];
    else if (v > 0)
      out[j] = p[j] * ratPow(tr + p[k], v);
    else
      out[j] = p[j] * ratPow(Rat(1) + tr / p[k], v);
  }
  return out;
}

// Jacobian (log coordinates) of tEdgeForward, raw slots.
QMat tEdgeJacobian(const IMat& B, int k, const RatVec& p, const Rat& tr) {
  int n = B.rows;
  QMat J(n, n);
  for (int j = 0; j < n; ++j) {
    if (j == k) {
      J(j, k) = Rat(-1);
      continue;
    }
    J(j, j) = Rat(1);
    long long v = B(k, j);
    if (v > 0)
      J(j, k) = Rat(v) * p[k] / (tr + p[k]);
    else if (v < 0)
      J(j, k) = Rat(-v) * tr / (p[k] + tr);
  }
  return J;
}

struct TWalk {
  RatVec point;
  QMat jac;
};

// Walk the canonical path with the t-deformed maps; sigma = sigma^{a} with
// a = the start chart of the weight vector m.
TWalk tWalk(const ExchangeGraph& E, int a, int s1, int s2, const RatVec& p, const Rat& t,
            const IVec& m) {
  int n = E.n;
  TWalk w{p, QMat::identity(n)};
  int cur = s1;
  for (int eid : E.path(s1, s2)) {
    const GraphEdge& e = E.edges[eid];
    int kappa = tropicalSign(E, a, cur, e.k);
    if (kappa == +1) {
      long long r = imatApply(muLinear(E, a, a, cur), m)[e.k];
      if (r <= 0) throw std::domain_error("tWalk: nonpositive deformation exponent");
      Rat tr = ratPow(t, r);
      const IMat& B = E.seeds[cur].B;
      QMat Jraw = tEdgeJacobian(B, e.k, w.point, tr);
      RatVec praw = tEdgeForward(B, e.k, w.point, tr);
      QMat J(n, n);
      RatVec pn(n);
      for (int j = 0; j < n; ++j) {
        pn[e.rho[j]] = praw[j];
        for (int l = 0; l < n; ++l) J(e.rho[j], l) = Jraw(j, l);
      }
      w.jac = qmatMul(J, w.jac);
      w.point = pn;
    } else {
      // Cross as the inverse of the opposite half-edge (which has kappa=+1
      // at the destination vertex).
      int rid = E.eps[eid];
      const GraphEdge& rev = E.edges[rid];
      int dst = e.dst;  // rev.src == dst
      long long r = imatApply(muLinear(E, a, a, dst), m)[rev.k];
      if (r <= 0) throw std::domain_error("tWalk: nonpositive deformation exponent (reverse)");
      Rat tr = ratPow(t, r);
      const IMat& B = E.seeds[dst].B;
      // Solve tEdgeForward(B, rev.k, q) = w.point (up to rev.rho slots).
      RatVec img(n);
      for (int j = 0; j < n; ++j) img[j] = w.point[rev.rho[j]];
      RatVec q(n);
      q[rev.k] = Rat(1) / img[rev.k];
      for (int j = 0; j < n; ++j) {
        if (j == rev.k) continue;
        long long v = B(rev.k, j);
        if (v == 0)
          q[j] = img[j];
        else if (v > 0)
          q[j] = img[j] * ratPow(tr + q[rev.k], -v);
        else
          q[j] = img[j] * ratPow(Rat(1) + tr / q[rev.k], -v);
      }
      QMat Jraw = tEdgeJacobian(B, rev.k, q, tr);
      QMat Jfwd(n, n);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) Jfwd(rev.rho[j], l) = Jraw(j, l);
      auto inv = qmatInverse(Jfwd);
      if (!inv) throw NonInvertiblePhi("tWalk: singular edge Jacobian");
      w.jac = qmatMul(*inv, w.jac);
      w.point = q;
    }
    cur = e.dst;
  }
  return w;
}

}  // namespace

RatVec positiveTransitionT(const ExchangeGraph& E, int s1, int s2, const RatVec& p, const Rat& t,
                           const IVec& m) {
  return tWalk(E, s1, s1, s2, p, t, m).point;
}

QMat jacobianPathT(const ExchangeGraph& E, int s1, int s2, const RatVec& p, const Rat& t,
                   const IVec& m) {
  return tWalk(E, s1, s1, s2, p, t, m).jac;
}

std::vector<CCFamily> tangentJacobianFamilies(const ExchangeGraph& E, const PositivePoint& x,
                                              const IVec& m) {
  std::vector<CCFamily> out;
  int n = E.n;
  for (int s = 0; s < E.vertexCount(); ++s) {
    CCFamily f;
    f.name = "vertex" + std::to_string(s);
    f.base.gens = QMat::identity(n);
    ExchangeGraph graph = E;  // value copy shared across the closures
    PositivePoint px = x;
    IVec mm = m;
    f.phi.exact = [graph, px, mm, s](const Rat& t) -> std::optional<QMat> {
      QMat J = jacobianPathT(graph, px.chart, s, px.p, t, mm);
      auto inv = qmatInverse(J);
      if (!inv) throw NonInvertiblePhi("tangent family: singular Jacobian");
      return *inv;
    };
    f.phi.approx = [graph, px, mm, s](double t) {
      QMat J = jacobianPathT(graph, px.chart, s, px.p, Rat(t), mm);
      auto inv = qmatInverse(J);
      if (!inv) throw NonInvertiblePhi("tangent family: singular Jacobian");
      DMat out(J.rows, J.cols);
      for (int i = 0; i < J.rows; ++i)
        for (int j = 0; j < J.cols; ++j) out(i, j) = toDouble((*inv)(i, j));
      return out;
    };
    out.push_back(std::move(f));
  }
  return out;
}

FanAtVerdict checkFanAt(const std::vector<CCFamily>& families, const Rat& t, double tol) {
  FanAtVerdict verdict;
  RealizedExact ex = realizeExact(families, t);
  if (ex.available) {
    Fan fan;
    fan.dim = families.front().base.gens.rows;
    fan.maximal = ex.cones;
    FanCheck check = verifyFan(fan);
    verdict.isFan = check.distinct && check.intersectionsAreFaces;
    verdict.complete = check.complete;
    verdict.issues = check.issues;
    return verdict;
  }
  // Double path: 2-d angular accounting.
  auto angs = realizeAngular(families, toDouble(t), tol);
  double total = 0;
  for (const auto& a : angs) total += a.hi - a.lo;
  std::vector<Ang> sorted = angs;
  std::sort(sorted.begin(), sorted.end(), [](const Ang& a, const Ang& b) { return a.lo < b.lo; });
  // Pairwise overlap of open intervals on the circle.
  for (size_t i = 0; i < sorted.size(); ++i)
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
        double lo = std::max(sorted[i].lo, sorted[j].lo + shift);
        double hi = std::min(sorted[i].hi, sorted[j].hi + shift);
        if (hi - lo > tol) {
          verdict.isFan = false;
          verdict.issues.push_back("cone interiors overlap");
        }
      }
    }
  if (std::fabs(total - kTwoPi) > tol) {
    verdict.complete = false;
    verdict.issues.push_back("angles sum to " + std::to_string(total) + " (expected 2*pi)");
  }
  return verdict;
}

namespace {

struct RealizedCones {
  bool exact = false;
  std::vector<Cone> cones;                // exact path
  std::vector<std::vector<double>> rays;  // double path: flattened 2-d rays per family
};

RealizedCones realize(const std::vector<CCFamily>& families, const Rat& t, double tol) {
  RealizedCones out;
  RealizedExact ex = realizeExact(families, t);
  if (ex.available) {
    out.exact = true;
    out.cones = ex.cones;
    return out;
  }
  for (const auto& f : families) {
    DMat phi = f.phi.approx(toDouble(t));
    double det = phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0);
    if (std::fabs(det) < tol) throw NonInvertiblePhi("Phi(t) singular for family " + f.name);
    std::vector<double> rays;
    for (int j = 0; j < f.base.gens.cols; ++j) {
      double x = 0, y = 0;
      for (int l = 0; l < 2; ++l) {
        x += phi(0, l) * toDouble(f.base.gens(l, j));
        y += phi(1, l) * toDouble(f.base.gens(l, j));
      }
      double norm = std::hypot(x, y);
      rays.push_back(x / norm);
      rays.push_back(y / norm);
    }
    out.rays.push_back(std::move(rays));
  }
  return out;
}

bool sameRayD(double x1, double y1, double x2, double y2, double tol) {
  return std::fabs(x1 - x2) < tol && std::fabs(y1 - y2) < tol;
}

// Shared-facet data between families i and j at parameter t (2-d double
// version: a shared ray with the two cones on opposite sides).
bool sharedFacet2d(const std::vector<double>& ri, const std::vector<double>& rj, double tol,
                   int* whichI = nullptr, int* whichJ = nullptr) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (!sameRayD(ri[2 * a], ri[2 * a + 1], rj[2 * b], rj[2 * b + 1], tol)) continue;
      // Opposite sides: cross products of the remaining rays with the shared
      // ray have opposite signs.
      double sx = ri[2 * a], sy = ri[2 * a + 1];
      double ox = ri[2 * (1 - a)], oy = ri[2 * (1 - a) + 1];
      double px = rj[2 * (1 - b)], py = rj[2 * (1 - b) + 1];
      double c1 = sx * oy - sy * ox;
      double c2 = sx * py - sy * px;
      if (c1 * c2 < -tol * tol) {
        if (whichI) *whichI = a;
        if (whichJ) *whichJ = b;
        return true;
      }
    }
  return false;
}

}  // namespace

PersistenceVerdict checkFacetPersistence(const std::vector<CCFamily>& families, const Rat& t0,
                                         const std::vector<Rat>& grid, double tol) {
  PersistenceVerdict verdict;
  int nf = static_cast<int>(families.size());
  RealizedCones at0 = realize(families, t0, tol);

  // Find the facet-sharing pairs at t0.
  struct PairInfo {
    int i, j;
    int rayI, rayJ;                    // double path: which base generator
    std::vector<IVec> facetI, facetJ;  // exact path: shared rays pulled back? kept realized
  };
  std::vector<PairInfo> pairs;
  if (at0.exact) {
    for (int i = 0; i < nf; ++i)
      for (int j = i + 1; j < nf; ++j) {
        auto raysI = coneRays(at0.cones[i]);
        std::vector<IVec> shared;
        for (const auto& r : raysI) {
          RatVec rv(r.size());
          for (size_t l = 0; l < r.size(); ++l) rv[l] = Rat(r[l]);
          if (coneContains(at0.cones[j], rv)) shared.push_back(r);
        }
        int dim = at0.cones[i].gens.rows;
        if (static_cast<int>(shared.size()) != dim - 1) continue;
        std::string why;
        if (!coneIntersectionIsCommonFace(at0.cones[i], at0.cones[j], &why)) continue;
        pairs.push_back({i, j, -1, -1, shared, shared});
      }
  } else {
    for (int i = 0; i < nf; ++i)
      for (int j = i + 1; j < nf; ++j) {
        int a = -1, b = -1;
        if (sharedFacet2d(at0.rays[i], at0.rays[j], 1e-9, &a, &b))
          pairs.push_back({i, j, a, b, {}, {}});
      }
  }
  for (const auto& p : pairs) verdict.pairs.push_back({p.i, p.j, QMat(), QMat()});

  for (const auto& t : grid) {
    RealizedCones rc;
    try {
      rc = realize(families, t, tol);
    } catch (const NonInvertiblePhi& e) {
      if (verdict.ok) {
        verdict.ok = false;
        verdict.failT = t;
        verdict.issues.push_back(std::string(e.what()) + " at t = " + ratToString(t));
      }
      continue;
    }
    for (const auto& p : pairs) {
      bool ok = true;
      std::string why;
      if (rc.exact) {
        auto raysI = coneRays(rc.cones[p.i]);
        std::vector<IVec> shared;
        for (const auto& r : raysI) {
          RatVec rv(r.size());
          for (size_t l = 0; l < r.size(); ++l) rv[l] = Rat(r[l]);
          if (coneContains(rc.cones[p.j], rv)) shared.push_back(r);
        }
        int dim = rc.cones[p.i].gens.rows;
        if (static_cast<int>(shared.size()) != dim - 1 ||
            !coneIntersectionIsCommonFace(rc.cones[p.i], rc.cones[p.j], &why))
          ok = false;
      } else {
        // The tracked generators must still span a shared facet.
        int a = p.rayI, b = p.rayJ;
        const auto& ri = rc.rays[p.i];
        const auto& rj = rc.rays[p.j];
        if (!sameRayD(ri[2 * a], ri[2 * a + 1], rj[2 * b], rj[2 * b + 1], 1e-9)) {
          ok = false;
        } else {
          double sx = ri[2 * a], sy = ri[2 * a + 1];
          double ox = ri[2 * (1 - a)], oy = ri[2 * (1 - a) + 1];
          double px = rj[2 * (1 - b)], py = rj[2 * (1 - b) + 1];
          if ((sx * oy - sy * ox) * (sx * py - sy * px) >= 0) ok = false;
        }
      }
      if (!ok && verdict.ok) {
        verdict.ok = false;
        verdict.failT = t;
        verdict.failI = p.i;
        verdict.failJ = p.j;
        verdict.issues.push_back("facet between " + families[p.i].name + " and " +
                                 families[p.j].name + " lost at t = " + ratToString(t));
      }
    }
  }
  return verdict;
}

DeformReport certify(const std::vector<CCFamily>& families, const Rat& t0,
                     const std::vector<Rat>& grid, double tol) {
  DeformReport rep;
  rep.grid = grid;
  FanAtVerdict at0 = checkFanAt(families, t0, tol);
  rep.hypothesisFanAtT0 = at0.ok();
  if (!rep.hypothesisFanAtT0) {
    rep.issues.push_back("hypothesis (i) fails: not a complete fan at t0");
    for (const auto& s : at0.issues) rep.issues.push_back("  " + s);
    return rep;
  }
  rep.persistence = checkFacetPersistence(families, t0, grid, tol);
  if (!rep.persistence.ok) {
    rep.issues.push_back("hypothesis (ii) fails: " +
                         (rep.persistence.issues.empty() ? std::string("facet lost")
                                                         : rep.persistence.issues.front()));
    return rep;
  }
  rep.certified = true;
  for (const auto& t : grid) {
    FanAtVerdict v;
    try {
      v = checkFanAt(families, t, tol);
    } catch (const NonInvertiblePhi& e) {
      v.isFan = false;
      v.issues.push_back(e.what());
    }
    rep.perT.push_back(v);
    if (!v.ok() && !rep.firstBadT) {
      rep.firstBadT = t;
      rep.certified = false;
      rep.issues.push_back("fan validity/completeness fails at t = " + ratToString(t));
    }
  }
  return rep;
}

std::vector<Rat> uniformGrid(int points) {
  std::vector<Rat> out;
  for (int i = 0; i < points; ++i) out.push_back(Rat(i, points - 1));
  return out;
}

}  // namespace cstab
