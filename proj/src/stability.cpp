#include "cstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "cstab/rng.hpp"

namespace cstab {

namespace {

bool allNonNegative(const RatVec& w) {
  for (const auto& v : w)
    if (v < 0) return false;
  return true;
}

// For a chart a with y in sigma^a, the face mask of the minimal face of the
// positive orthant containing y.
std::vector<int> faceMask(const RatVec& w) {
  std::vector<int> mask;
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0) mask.push_back(static_cast<int>(i));
  return mask;
}

// Transition the generators {e_i : i in mask at chart a} to chart b. Returns
// nullopt unless all images lie in the positive orthant; otherwise the mask
// of coordinates they span (images of orthant-face rays are unit vectors).
std::optional<std::vector<int>> transitionMask(const ExchangeGraph& E, int a,
                                               const std::vector<int>& mask, int b) {
  std::vector<int> out;
  for (int i : mask) {
    IVec ei(E.n, 0);
    ei[i] = 1;
    IVec img = E.tropicalTransition(a, b, ei);
    int hit = -1;
    for (int j = 0; j < E.n; ++j) {
      if (img[j] < 0) return std::nullopt;
      if (img[j] != 0) {
        if (hit >= 0 || img[j] != 1) {
          // tau is not a face of sigma^b through this chart; membership fails
          // elsewhere, so treat as out of range.
          return std::nullopt;
        }
        hit = j;
      }
    }
    out.push_back(hit);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<CellId> classify(const ExchangeGraph& E, const StabPoint& p,
                               std::vector<CellId>* allMatches) {
  // Minimal cone of y.
  int a = -1;
  std::vector<int> mask;
  for (int s = 0; s < E.vertexCount(); ++s) {
    RatVec w = E.tropicalTransition(p.chart, s, p.y);
    if (allNonNegative(w)) {
      a = s;
      mask = faceMask(w);
      break;
    }
  }
  if (a < 0) throw std::domain_error("classify: tropical fan does not cover y");

  std::optional<CellId> found;
  for (int b = 0; b < E.vertexCount(); ++b) {
    auto maskB = transitionMask(E, a, mask, b);
    if (!maskB) continue;
    RatVec u = E.tropicalTransition(p.chart, b, p.x);
    bool interior = true;
    size_t mi = 0;
    for (int i = 0; i < E.n && interior; ++i) {
      if (mi < maskB->size() && (*maskB)[mi] == i) {
        ++mi;
        continue;
      }
      if (u[i] <= 0) interior = false;
    }
    if (!interior) continue;
    CellId cell{b, *maskB};
    if (allMatches) {
      allMatches->push_back(cell);
      if (!found) found = cell;
    } else {
      return cell;
    }
  }
  return found;
}

bool inU(const ExchangeGraph& E, const CellId& cell, const StabPoint& p) {
  // y must lie in the open star of tau: its minimal cone tau' contains tau.
  int a = -1;
  std::vector<int> maskPrime;
  for (int s = 0; s < E.vertexCount(); ++s) {
    RatVec w = E.tropicalTransition(p.chart, s, p.y);
    if (allNonNegative(w)) {
      a = s;
      maskPrime = faceMask(w);
      break;
    }
  }
  if (a < 0) throw std::domain_error("inU: tropical fan does not cover y");
  for (int i : cell.tauMask) {
    IVec ei(E.n, 0);
    ei[i] = 1;
    IVec img = E.tropicalTransition(cell.sigma, a, ei);
    for (int j = 0; j < E.n; ++j) {
      if (img[j] < 0) return false;
      if (img[j] > 0 && !std::binary_search(maskPrime.begin(), maskPrime.end(), j)) return false;
    }
  }
  // q_tau(x) in int q_tau(sigma).
  RatVec u = E.tropicalTransition(p.chart, cell.sigma, p.x);
  size_t mi = 0;
  for (int i = 0; i < E.n; ++i) {
    if (mi < cell.tauMask.size() && cell.tauMask[mi] == i) {
      ++mi;
      continue;
    }
    if (u[i] <= 0) return false;
  }
  return true;
}

std::vector<int> varpiAnchors(const ExchangeGraph& E, const CellId& cell, const StabPoint& p) {
  std::vector<int> anchors;
  for (int s = 0; s < E.vertexCount(); ++s) {
    RatVec w = E.tropicalTransition(p.chart, s, p.y);
    if (!allNonNegative(w)) continue;
    if (transitionMask(E, cell.sigma, cell.tauMask, s)) anchors.push_back(s);
  }
  return anchors;
}

QCVec stabChartValue(const ExchangeGraph& E, int s, const StabPoint& p) {
  RatVec u = E.tropicalTransition(p.chart, s, p.x);
  RatVec v = E.tropicalTransition(p.chart, s, p.y);
  QCVec out(E.n);
  for (int i = 0; i < E.n; ++i) out[i] = QC(u[i], v[i]);
  return out;
}

QCVec varpiEval(const ExchangeGraph& E, const CellId& cell, const StabPoint& p, int anchor,
                int* chosenAnchor) {
  if (!inU(E, cell, p)) throw NotInDomain("varpiEval: point outside U(sigma,tau)");
  int a = anchor;
  if (a < 0) {
    auto anchors = varpiAnchors(E, cell, p);
    if (anchors.empty()) throw NotInDomain("varpiEval: no admissible anchor");
    a = anchors.front();
  }
  if (chosenAnchor) *chosenAnchor = a;
  IMat M = muLinear(E, cell.sigma, a, cell.sigma);
  RatVec u = E.tropicalTransition(p.chart, a, p.x);
  RatVec v = E.tropicalTransition(p.chart, a, p.y);
  QCVec out(E.n);
  for (int i = 0; i < E.n; ++i) {
    Rat re(0), im(0);
    for (int j = 0; j < E.n; ++j) {
      re += M(i, j) * u[j];
      im += M(i, j) * v[j];
    }
    out[i] = QC(re, im);
  }
  return out;
}

IMat transitionMatrix(const ExchangeGraph& E, const CellId& cell1, const CellId& cell2,
                      const StabPoint& p) {
  if (!inU(E, cell1, p) || !inU(E, cell2, p))
    throw NotInDomain("transitionMatrix: witness not in both chart domains");
  auto at = classify(E, p);
  if (!at) throw NotInDomain("transitionMatrix: witness not in the stability space");
  int s = at->sigma;
  IMat M1 = muLinear(E, cell1.sigma, cell1.sigma, s);
  IMat M2 = muLinear(E, cell2.sigma, s, cell2.sigma);
  return imatMul(M2, M1);
}

StabPoint autApplyStab(const ExchangeGraph& E, const GraphAutomorphism& g, const StabPoint& p) {
  StabPoint out;
  out.chart = g.vmap[p.chart];
  out.x.assign(E.n, Rat(0));
  out.y.assign(E.n, Rat(0));
  for (int i = 0; i < E.n; ++i) {
    out.x[g.lmap[p.chart][i]] = p.x[i];
    out.y[g.lmap[p.chart][i]] = p.y[i];
  }
  return out;
}

QCVec stabEdgeGlue(const ExchangeMatrix& B, int k, const QCVec& w) {
  QCVec out(B.n);
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
    const Rat& re = w[k].re;
    if (v > 0 && re >= 0)
      out[j] = w[j] + QC(Rat(v)) * w[k];
    else if (v < 0 && re <= 0)
      out[j] = w[j] - QC(Rat(v)) * w[k];
    else
      out[j] = w[j];
  }
  return out;
}

namespace {

Rat ratFromDouble(double x, double snapEps) {
  double ax = std::fabs(x);
  if (ax < snapEps) {
    if (ax >= snapEps / 10.0)
      throw AmbiguousSnap("value " + std::to_string(x) + " inside the ambiguous snap band");
    return Rat(0);
  }
  return Rat(x);
}

StabPoint rationalize(int chart, const std::vector<std::complex<double>>& w, double snapEps) {
  StabPoint p;
  p.chart = chart;
  p.x.resize(w.size());
  p.y.resize(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    p.x[i] = ratFromDouble(w[i].real(), snapEps);
    p.y[i] = ratFromDouble(w[i].imag(), snapEps);
  }
  return p;
}

constexpr double kPi = 3.14159265358979323846;

double argInUpperHalf(const std::complex<double>& z, double snapEps) {
  double a = std::atan2(z.imag(), z.real());
  if (std::fabs(a) < snapEps) a = 0.0;
  if (a < 0) a += 2 * kPi;  // tiny negative noise ends up near 2*pi; clamp below
  if (a > kPi) a = kPi;
  return a;
}

}  // namespace

FlowResult stabFlow(const ExchangeGraph& E, const StabPoint& p0, double r, double theta,
                    const FlowOptions& opts) {
  // The flow for negative angles is the inverse DT action followed by a
  // non-negative rotation: flow(-pi) = T^{-1}.
  StabPoint p = p0;
  if (theta < 0) {
    auto group = modularGroup(E);
    auto T = findDtElement(E, group);
    if (!T) throw std::domain_error("stabFlow: negative rotation needs a DT element");
    GraphAutomorphism Tinv = inverseAut(E, *T);
    while (theta < 0) {
      p = autApplyStab(E, Tinv, p);
      theta += kPi;
    }
  }

  auto cell = classify(E, p);
  if (!cell) throw NotInDomain("stabFlow: start point not in the stability space");

  int chart = cell->sigma;
  QCVec wExact = stabChartValue(E, chart, p);
  std::vector<std::complex<double>> w(E.n);
  double scale = std::exp(r);
  for (int i = 0; i < E.n; ++i)
    w[i] = scale * std::complex<double>(toDouble(wExact[i].re), toDouble(wExact[i].im));

  FlowResult res;
  res.cell = *cell;
  res.events = 0;
  double left = theta;
  StabPoint cur = p;

  while (left > opts.coincidenceTol) {
    double nextEvent = std::numeric_limits<double>::infinity();
    for (int i = 0; i < E.n; ++i) {
      double a = argInUpperHalf(w[i], opts.snapEps);
      nextEvent = std::min(nextEvent, kPi - a);
    }
    if (nextEvent < 0) nextEvent = 0;
    if (left < nextEvent - opts.coincidenceTol) {
      std::complex<double> rot(std::cos(left), std::sin(left));
      for (auto& z : w) z *= rot;
      left = 0;
      break;
    }
    // Advance to the event, snap the exiting coordinates onto the negative
    // real axis, and reclassify exactly.
    std::complex<double> rot(std::cos(nextEvent), std::sin(nextEvent));
    for (auto& z : w) z *= rot;
    for (int i = 0; i < E.n; ++i) {
      double a = argInUpperHalf(w[i], opts.snapEps);
      if (kPi - a <= opts.coincidenceTol * 10 + 1e-13) w[i] = {-std::abs(w[i]), 0.0};
    }
    left -= nextEvent;
    cur = rationalize(chart, w, opts.snapEps);
    auto newCell = classify(E, cur);
    if (!newCell) throw StuckAtBoundary("stabFlow: reclassification failed after an event");
    res.cell = *newCell;
    if (newCell->sigma != chart) {
      QCVec moved = stabChartValue(E, newCell->sigma, cur);
      for (int i = 0; i < E.n; ++i)
        w[i] = std::complex<double>(toDouble(moved[i].re), toDouble(moved[i].im));
      chart = newCell->sigma;
    }
    if (++res.events > opts.maxEvents)
      throw StuckAtBoundary("stabFlow: event budget exhausted (no progress)");
  }

  cur = rationalize(chart, w, opts.snapEps);
  auto finalCell = classify(E, cur);
  if (!finalCell) throw StuckAtBoundary("stabFlow: final point failed to classify");
  res.cell = *finalCell;
  res.point = cur;
  res.w = w;
  return res;
}

StabPoint randomStabPoint(const ExchangeGraph& E, Rng& rng) {
  // Sample phi_S(chart) coordinates in the open upper half plane plus an
  // occasional positive-real coordinate; such points always classify.
  StabPoint p;
  p.chart = static_cast<int>(rng.intIn(0, E.vertexCount() - 1));
  p.x.resize(E.n);
  p.y.resize(E.n);
  for (int i = 0; i < E.n; ++i) {
    bool boundary = rng.intIn(0, 4) == 0;
    if (boundary) {
      p.x[i] = rng.positiveRational();
      p.y[i] = 0;
    } else {
      p.x[i] = rng.smallRational(60, 10);
      p.y[i] = rng.positiveRational();
    }
  }
  return p;
}

DtRotationReport checkDtRotation(const ExchangeGraph& E, const GraphAutomorphism& T,
                                 int samples, unsigned seed, double tol) {
  DtRotationReport rep;
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    StabPoint p = randomStabPoint(E, rng);
    auto cell = classify(E, p);
    if (!cell) continue;
    ++rep.checked;
    FlowResult f = stabFlow(E, p, 0.0, kPi);
    StabPoint tp = autApplyStab(E, T, p);
    auto tCell = classify(E, tp);
    if (!tCell || *tCell != f.cell) {
      rep.ok = false;
      rep.mismatches.push_back("sample " + std::to_string(t) + ": cell mismatch");
      continue;
    }
    QCVec expect = stabChartValue(E, f.cell.sigma, tp);
    for (int i = 0; i < E.n; ++i) {
      std::complex<double> e(toDouble(expect[i].re), toDouble(expect[i].im));
      if (std::abs(e - f.w[i]) > tol) {
        rep.ok = false;
        rep.mismatches.push_back("sample " + std::to_string(t) + ": coordinate " +
                                 std::to_string(i) + " off by " + std::to_string(std::abs(e - f.w[i])));
        break;
      }
    }
  }
  return rep;
}

}  // namespace cstab
