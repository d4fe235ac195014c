#include "cstab/tropical.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cstab/rng.hpp"

namespace cstab {

Cone maximalCone(const ExchangeGraph& E, int a, int s) {
  int n = E.n;
  Cone c{s, a, IMat(n, n)};
  for (int j = 0; j < n; ++j) {
    IVec ej(n, 0);
    ej[j] = 1;
    c.gens.setCol(j, primitive(E.tropicalTransition(a, s, ej)));
  }
  return c;
}

int tropicalSign(const Cone& cone, int i) {
  for (int j = 0; j < cone.gens.cols; ++j) {
    if (cone.gens(i, j) > 0) return 1;
    if (cone.gens(i, j) < 0) return -1;
  }
  throw std::domain_error("tropicalSign: cone lies in the hyperplane w(i)=0");
}

int tropicalSign(const ExchangeGraph& E, int a, int s, int i) {
  return tropicalSign(maximalCone(E, a, s), i);
}

std::optional<RatVec> coneCoordinates(const Cone& cone, const RatVec& x) {
  QMat m(cone.gens.rows, cone.gens.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = Rat(cone.gens(i, j));
  auto lam = solveExact(m, x);
  if (!lam) return std::nullopt;
  // solveExact returns one solution; generators are linearly independent for
  // the cones handled here, so it is the only one.
  return lam;
}

bool coneContains(const Cone& cone, const RatVec& x) {
  auto lam = coneCoordinates(cone, x);
  if (!lam) return false;
  for (const auto& l : *lam)
    if (l < 0) return false;
  return true;
}

bool coneContainsInterior(const Cone& cone, const RatVec& x) {
  auto lam = coneCoordinates(cone, x);
  if (!lam) return false;
  for (const auto& l : *lam)
    if (l <= 0) return false;
  return true;
}

IMat muLinear(const ExchangeGraph& E, int a, int s1, int s2) {
  int n = E.n;
  // Walk the canonical path, carrying sigma^a's generators to read off the
  // tropical sign at each edge, and compose the single-edge linear maps.
  IMat M = IMat::identity(n);
  IMat gens = maximalCone(E, a, s1).gens;
  int cur = s1;
  for (int eid : E.path(s1, s2)) {
    const GraphEdge& e = E.edges[eid];
    int k = e.k;
    Cone here{cur, a, gens};
    int kappa = tropicalSign(here, k);
    const IMat& B = E.seeds[cur].B;
    IMat step(n, n);
    for (int j = 0; j < n; ++j) {
      if (j == k) {
        step(e.rho[j], k) = -1;
      } else {
        step(e.rho[j], j) = 1;
        long long vkj = B(k, j);
        if (kappa * vkj >= 0) step(e.rho[j], k) = kappa * vkj;
      }
    }
    M = imatMul(step, M);
    IMat next(n, n);
    for (int c = 0; c < n; ++c) next.setCol(c, E.crossEdge(eid, gens.col(c)));
    gens = next;
    cur = e.dst;
  }
  return M;
}

std::string rayKeyOf(const IVec& v) {
  std::ostringstream os;
  for (auto x : v) os << x << ',';
  return os.str();
}

std::vector<IVec> coneRays(const Cone& c) {
  std::vector<IVec> out;
  for (int j = 0; j < c.gens.cols; ++j) out.push_back(primitive(c.gens.col(j)));
  return out;
}

std::string coneKeyOf(const Cone& c) {
  auto rays = coneRays(c);
  std::vector<std::string> keys;
  for (const auto& r : rays) keys.push_back(rayKeyOf(r));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + ";";
  return out;
}

namespace {

// Halfspace description of a full-dimensional simplicial cone: rows of the
// inverse generator matrix.
std::vector<RatVec> coneHalfspaces(const Cone& c) {
  auto inv = qmatInverse(toQ(c.gens));
  if (!inv) throw std::domain_error("coneHalfspaces: generators not independent");
  std::vector<RatVec> rows;
  for (int i = 0; i < inv->rows; ++i) {
    RatVec r(inv->cols);
    for (int j = 0; j < inv->cols; ++j) r[j] = (*inv)(i, j);
    rows.push_back(std::move(r));
  }
  return rows;
}

RatVec toRatVec(const IVec& v) {
  RatVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

}  // namespace

// Exact check that cone1 /\ cone2 equals the cone over their shared rays:
// the shared-ray sets must agree, and every extreme ray of the H-description
// intersection must lie in the shared set.
bool coneIntersectionIsCommonFace(const Cone& c1, const Cone& c2, std::string* issue) {
  auto rays1 = coneRays(c1), rays2 = coneRays(c2);
  std::set<std::string> set1, set2;
  for (const auto& r : rays1) set1.insert(rayKeyOf(r));
  for (const auto& r : rays2) set2.insert(rayKeyOf(r));

  std::set<std::string> shared;
  for (const auto& r : rays1)
    if (coneContains(c2, toRatVec(r))) {
      if (!set2.count(rayKeyOf(r))) {
        if (issue) *issue = "ray of first cone interior to second";
        return false;
      }
      shared.insert(rayKeyOf(r));
    }
  for (const auto& r : rays2)
    if (coneContains(c1, toRatVec(r))) {
      if (!set1.count(rayKeyOf(r))) {
        if (issue) *issue = "ray of second cone interior to first";
        return false;
      }
      if (!shared.count(rayKeyOf(r))) {
        if (issue) *issue = "shared ray sets disagree";
        return false;
      }
    }

  auto hs = coneHalfspaces(c1);
  auto hs2 = coneHalfspaces(c2);
  hs.insert(hs.end(), hs2.begin(), hs2.end());
  for (const auto& ray : extremeRays(hs, c1.gens.rows)) {
    if (!shared.count(rayKeyOf(ray))) {
      if (issue) *issue = "intersection has a ray outside the shared face";
      return false;
    }
  }
  return true;
}


Fan buildFan(const ExchangeGraph& E, int chart) {
  Fan fan;
  fan.chart = chart;
  fan.dim = E.n;
  for (int a = 0; a < E.vertexCount(); ++a) fan.maximal.push_back(maximalCone(E, a, chart));
  return fan;
}

FanCheck verifyFan(const Fan& fan) {
  FanCheck out;
  int m = static_cast<int>(fan.maximal.size());
  std::set<std::string> keys;
  for (const auto& c : fan.maximal) {
    if (!keys.insert(coneKeyOf(c)).second) {
      out.distinct = false;
      out.issues.push_back("duplicate maximal cone " + coneKeyOf(c));
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::string why;
      if (!coneIntersectionIsCommonFace(fan.maximal[i], fan.maximal[j], &why)) {
        out.intersectionsAreFaces = false;
        out.issues.push_back("cones " + std::to_string(i) + "," + std::to_string(j) + ": " + why);
      }
    }
  // Completeness: every facet of every maximal cone is a facet of exactly one
  // other maximal cone.
  std::map<std::string, int> facetCount;
  for (const auto& c : fan.maximal) {
    auto rays = coneRays(c);
    for (size_t drop = 0; drop < rays.size(); ++drop) {
      std::vector<std::string> fk;
      for (size_t r = 0; r < rays.size(); ++r)
        if (r != drop) fk.push_back(rayKeyOf(rays[r]));
      std::sort(fk.begin(), fk.end());
      std::string key;
      for (const auto& s : fk) key += s + ";";
      facetCount[key]++;
    }
  }
  for (const auto& [key, count] : facetCount) {
    if (count != 2) {
      out.complete = false;
      out.issues.push_back("facet " + key + " borders " + std::to_string(count) +
                           " maximal cones (expected 2)");
    }
  }
  return out;
}

FanCheck probeCompleteness(const Fan& fan, int samples, unsigned seed) {
  FanCheck out;
  Rng rng(seed);
  int n = fan.dim;
  for (int t = 0; t < samples; ++t) {
    RatVec x(n);
    bool allZero = true;
    for (int i = 0; i < n; ++i) {
      x[i] = rng.smallRational();
      if (x[i] != 0) allZero = false;
    }
    if (allZero) x[0] = 1;
    std::vector<int> hits;
    for (size_t c = 0; c < fan.maximal.size(); ++c)
      if (coneContains(fan.maximal[c], x)) hits.push_back(static_cast<int>(c));
    if (hits.empty()) {
      out.complete = false;
      out.issues.push_back("uncovered direction at sample " + std::to_string(t));
      continue;
    }
    for (size_t a = 0; a + 1 < hits.size(); ++a)
      for (size_t b = a + 1; b < hits.size(); ++b) {
        const Cone& c1 = fan.maximal[hits[a]];
        const Cone& c2 = fan.maximal[hits[b]];
        std::vector<IVec> shared;
        for (const auto& r : coneRays(c1))
          if (coneContains(c2, toRatVec(r))) shared.push_back(r);
        if (shared.empty()) {
          out.intersectionsAreFaces = false;
          out.issues.push_back("sample in two cones with no shared ray");
          continue;
        }
        Cone face{c1.chart, -1, IMat(n, static_cast<int>(shared.size()))};
        for (size_t j = 0; j < shared.size(); ++j) face.gens.setCol(static_cast<int>(j), shared[j]);
        if (!coneContains(face, x)) {
          out.intersectionsAreFaces = false;
          out.issues.push_back("sample in two cones but outside the shared face");
        }
      }
  }
  return out;
}

QuotientFan quotientFan(const ExchangeGraph& E, const Fan& fan, const Cone& tau,
                        FanCheck* check, bool verifyFanMapProperty) {
  int n = fan.dim;
  int k = tau.gens.cols;

  QuotientFan out;
  // Projection with kernel = span(tau): basis of the orthogonal complement of
  // the generators, as rows.
  QMat tg(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) tg(i, j) = Rat(tau.gens(j, i));
  auto comp = kernelBasis(tg);  // vectors orthogonal to all tau generators
  out.projection = QMat(static_cast<int>(comp.size()), n);
  for (size_t i = 0; i < comp.size(); ++i)
    for (int j = 0; j < n; ++j) out.projection(static_cast<int>(i), j) = comp[i][j];

  int q = out.projection.rows;  // n - k
  auto project = [&](const IVec& v) {
    RatVec x = toRatVec(v);
    return qmatApply(out.projection, x);
  };

  auto containsTau = [&](const Cone& c) {
    for (int j = 0; j < k; ++j)
      if (!coneContains(c, toRatVec(tau.gens.col(j)))) return false;
    return true;
  };

  for (size_t ci = 0; ci < fan.maximal.size(); ++ci) {
    const Cone& c = fan.maximal[ci];
    if (!containsTau(c)) continue;
    // Drop the generators lying in span(tau); the images of the remaining
    // ones generate the (simplicial) quotient cone.
    std::vector<IVec> gens;
    for (const auto& r : coneRays(c)) {
      RatVec img = project(r);
      bool zero = true;
      for (const auto& v : img)
        if (v != 0) { zero = false; break; }
      if (!zero) gens.push_back(primitiveOfRational(img));
    }
    Cone qc{fan.chart, c.originVertex, IMat(q, static_cast<int>(gens.size()))};
    for (size_t j = 0; j < gens.size(); ++j) qc.gens.setCol(static_cast<int>(j), gens[j]);
    out.cones.push_back(qc);
    out.originVertices.push_back(c.originVertex);
  }

  if (check) {
    if (q == 0) {
      // tau maximal: the quotient is the zero fan.
      *check = FanCheck{};
    } else {
      Fan qf{fan.chart, q, out.cones};
      *check = verifyFan(qf);
    }
    if (verifyFanMapProperty) {
      for (size_t ci = 0; ci < fan.maximal.size(); ++ci) {
        const Cone& c = fan.maximal[ci];
        bool inside = false;
        for (const auto& qc : out.cones) {
          bool all = true;
          for (const auto& r : coneRays(c)) {
            RatVec img = project(r);
            bool zero = true;
            for (const auto& v : img)
              if (v != 0) { zero = false; break; }
            if (q == 0 || zero) continue;
            if (!coneContains(qc, img)) { all = false; break; }
          }
          if (all) { inside = true; break; }
        }
        if (q == 0) inside = true;
        if (!inside) {
          check->issues.push_back("fan-map property fails for maximal cone " +
                                  std::to_string(ci));
          check->intersectionsAreFaces = false;
        }
      }
    }
  }
  (void)E;
  return out;
}

TropicalPoint boundaryMap(const ExchangeGraph& E, const TropicalPoint& x) {
  for (int s = 0; s < E.vertexCount(); ++s) {
    RatVec w = E.tropicalTransition(x.chart, s, x.w);
    bool nonneg = true;
    for (const auto& v : w)
      if (v < 0) { nonneg = false; break; }
    if (nonneg) return TropicalPoint{s, w};
  }
  throw std::domain_error("boundaryMap: point not covered by any maximal cone");
}

bool preservesSkewForm(const IMat& M, const IMat& omegaSrc, const IMat& omegaDst) {
  // The dual of mu intertwines the forms: M Omega_src M^T = Omega_dst.
  return imatMul(imatMul(M, omegaSrc), imatTranspose(M)) == omegaDst;
}

DualityReport checkDuality(const ExchangeGraph& E) {
  DualityReport rep;
  ExchangeGraph Eop = oppositeGraph(E);
  int V = E.vertexCount();
  for (int s1 = 0; s1 < V; ++s1)
    for (int s2 = 0; s2 < V; ++s2) {
      IMat lhs = muLinear(Eop, s1, s1, s2);  // mu-bar^{sigma-bar^{s1}}(s1,s2)
      IMat rhs = muLinear(E, s2, s1, s2);    // mu^{sigma^{s2}}(s1,s2)
      if (!(lhs == rhs)) {
        rep.ok = false;
        rep.mismatches.push_back("pair (" + std::to_string(s1) + "," + std::to_string(s2) +
                                 "): linear maps differ");
      }
    }
  // Part (ii): sigma-bar^s(a) = mu^{sigma^a}(s,a)(positive orthant).
  for (int a = 0; a < V; ++a)
    for (int s = 0; s < V; ++s) {
      IMat lhs = maximalCone(Eop, s, a).gens;
      IMat rhs = muLinear(E, a, s, a);
      for (int c = 0; c < E.n; ++c)
        rhs.setCol(c, primitive(rhs.col(c)));
      if (!(lhs == rhs)) {
        rep.ok = false;
        rep.mismatches.push_back("opposite cone (" + std::to_string(s) + " in chart " +
                                 std::to_string(a) + ") differs from mu image");
      }
    }
  return rep;
}

}  // namespace cstab
