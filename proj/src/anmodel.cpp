#include "cstab/anmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <thread>

namespace cstab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;
}  // namespace

bool arcsCross(const Arc& a, const Arc& b) {
  auto inside = [](int x, const Arc& e) { return e.first < x && x < e.second; };
  return (inside(b.first, a) && !inside(b.second, a) && b.second != a.first &&
          b.second != a.second) ||
         (!inside(b.first, a) && inside(b.second, a) && b.first != a.first &&
          b.first != a.second);
}

bool Triangulation::valid() const {
  if (static_cast<int>(arcs.size()) != m - 3) return false;
  for (const auto& a : arcs) {
    if (a.first < 0 || a.second >= m || a.first >= a.second) return false;
    int gap = a.second - a.first;
    if (gap < 2 || gap > m - 2) return false;  // boundary edges are not arcs
  }
  for (size_t i = 0; i < arcs.size(); ++i)
    for (size_t j = i + 1; j < arcs.size(); ++j) {
      if (arcs[i] == arcs[j]) return false;
      if (arcsCross(arcs[i], arcs[j])) return false;
    }
  return true;
}

int Triangulation::arcIndex(const Arc& a) const {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), a);
  if (it == arcs.end() || *it != a) return -1;
  return static_cast<int>(it - arcs.begin());
}

Triangulation fanTriangulation(int m, int apex) {
  Triangulation T{m, {}};
  for (int k = 2; k <= m - 2; ++k) {
    int a = apex % m, b = (apex + k) % m;
    if (a > b) std::swap(a, b);
    T.arcs.push_back({a, b});
  }
  std::sort(T.arcs.begin(), T.arcs.end());
  return T;
}

std::vector<std::array<int, 3>> faces(const Triangulation& T) {
  // A triple of mutually adjacent vertices is always a face of a polygon
  // triangulation (the open triangle contains no vertices of the polygon).
  auto isEdge = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (b - a == 1 || (a == 0 && b == T.m - 1)) return true;
    return T.arcIndex({a, b}) >= 0;
  };
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < T.m; ++a)
    for (int b = a + 1; b < T.m; ++b) {
      if (!isEdge(a, b)) continue;
      for (int c = b + 1; c < T.m; ++c)
        if (isEdge(b, c) && isEdge(a, c)) out.push_back({a, b, c});
    }
  return out;
}

std::array<int, 4> arcQuadrilateral(const Triangulation& T, const Arc& arc) {
  std::vector<int> third;
  for (const auto& f : faces(T)) {
    int cnt = 0, other = -1;
    for (int v : f) {
      if (v == arc.first || v == arc.second)
        ++cnt;
      else
        other = v;
    }
    if (cnt == 2) third.push_back(other);
  }
  if (third.size() != 2)
    throw ArcNotPresent("arc (" + std::to_string(arc.first) + "," + std::to_string(arc.second) +
                        ") is not interior to the triangulation");
  // Cyclic order (a, b, c, d) with b strictly between the arc endpoints.
  int a = arc.first, c = arc.second;
  int b = (third[0] > a && third[0] < c) ? third[0] : third[1];
  int d = (b == third[0]) ? third[1] : third[0];
  return {a, b, c, d};
}

Triangulation flipArc(const Triangulation& T, const Arc& a) {
  if (T.arcIndex(a) < 0)
    throw ArcNotPresent("flip: arc (" + std::to_string(a.first) + "," +
                        std::to_string(a.second) + ") not present");
  auto quad = arcQuadrilateral(T, a);
  int x = quad[1], y = quad[3];
  if (x > y) std::swap(x, y);
  Triangulation out = T;
  out.arcs.erase(out.arcs.begin() + T.arcIndex(a));
  out.arcs.insert(std::lower_bound(out.arcs.begin(), out.arcs.end(), Arc{x, y}), Arc{x, y});
  return out;
}

std::vector<Triangulation> enumerateTriangulations(int m) {
  std::set<std::vector<Arc>> seen;
  std::deque<Triangulation> queue{fanTriangulation(m)};
  seen.insert(queue.front().arcs);
  std::vector<Triangulation> out;
  while (!queue.empty()) {
    Triangulation T = queue.front();
    queue.pop_front();
    out.push_back(T);
    for (const auto& a : T.arcs) {
      Triangulation next = flipArc(T, a);
      if (seen.insert(next.arcs).second) queue.push_back(next);
    }
  }
  return out;
}

ExchangeMatrix quiverOfTriangulation(const Triangulation& T) {
  int n = T.m - 3;
  ExchangeMatrix B{n, IMat(n, n)};
  for (const auto& f : faces(T)) {
    // Sides in anticlockwise traversal order.
    std::array<Arc, 3> sides = {Arc{std::min(f[0], f[1]), std::max(f[0], f[1])},
                                Arc{std::min(f[1], f[2]), std::max(f[1], f[2])},
                                Arc{std::min(f[0], f[2]), std::max(f[0], f[2])}};
    for (int s = 0; s < 3; ++s) {
      int i = T.arcIndex(sides[s]);
      int j = T.arcIndex(sides[(s + 1) % 3]);
      if (i < 0 || j < 0) continue;
      B.v(i, j) += 1;
      B.v(j, i) -= 1;
    }
  }
  return B;
}

ExchangeGraph flipExchangeGraph(int m) {
  int n = m - 3;
  ExchangeGraph E;
  E.n = n;
  std::map<std::vector<Arc>, int> ids;
  std::deque<int> queue;
  std::vector<Triangulation> tris{fanTriangulation(m)};
  ids[tris[0].arcs] = 0;
  E.seeds.push_back({quiverOfTriangulation(tris[0]).v, IMat::identity(n)});
  E.adj.push_back(std::vector<int>(n, -1));
  E.parentEdge.push_back(-1);
  queue.push_back(0);
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int k = 0; k < n; ++k) {
      if (E.adj[s][k] >= 0) continue;
      Triangulation T = tris[s];  // by value: tris may reallocate below
      Arc flipped = T.arcs[k];
      Triangulation next = flipArc(T, flipped);
      auto quad = arcQuadrilateral(T, flipped);
      int x = quad[1], y = quad[3];
      Arc newArc{std::min(x, y), std::max(x, y)};
      int t;
      bool fresh = false;
      auto it = ids.find(next.arcs);
      if (it == ids.end()) {
        t = static_cast<int>(tris.size());
        ids[next.arcs] = t;
        tris.push_back(next);
        E.seeds.push_back({quiverOfTriangulation(next).v, IMat::identity(n)});
        E.adj.push_back(std::vector<int>(n, -1));
        E.parentEdge.push_back(-1);
        fresh = true;
      } else {
        t = it->second;
      }
      std::vector<int> rho(n);
      for (int j = 0; j < n; ++j)
        rho[j] = next.arcIndex(j == k ? newArc : T.arcs[j]);
      std::vector<int> rhoInv(n);
      for (int j = 0; j < n; ++j) rhoInv[rho[j]] = j;
      int eFwd = static_cast<int>(E.edges.size());
      E.edges.push_back({s, t, k, rho});
      E.edges.push_back({t, s, rho[k], rhoInv});
      E.eps.push_back(eFwd + 1);
      E.eps.push_back(eFwd);
      E.adj[s][k] = eFwd;
      E.adj[t][rho[k]] = eFwd + 1;
      if (fresh) {
        E.parentEdge[t] = eFwd;
        queue.push_back(t);
      }
    }
  }
  return E;
}

namespace {

template <class C>
C det2(const ProjPt<C>& p, const ProjPt<C>& q) {
  return p.a * q.b - q.a * p.b;
}

}  // namespace

QC crossRatioQ(const PPq& p1, const PPq& p2, const PPq& p3, const PPq& p4) {
  QC num = det2(p1, p2) * det2(p3, p4);
  QC den = det2(p2, p3) * det2(p1, p4);
  if (den.isZero()) {
    if (num.isZero()) throw DegenerateQuadrilateral("cross-ratio 0/0");
    throw DegenerateQuadrilateral("cross-ratio pole");
  }
  return num / den;
}

Cplx crossRatioD(const PPd& p1, const PPd& p2, const PPd& p3, const PPd& p4) {
  Cplx num = det2(p1, p2) * det2(p3, p4);
  Cplx den = det2(p2, p3) * det2(p1, p4);
  if (std::abs(den) == 0.0) throw DegenerateQuadrilateral("cross-ratio pole");
  return num / den;
}

QCVec crossRatioChart(const LabeledPointsQ& points, const Triangulation& T) {
  QCVec out;
  for (const auto& arc : T.arcs) {
    auto q = arcQuadrilateral(T, arc);
    out.push_back(crossRatioQ(points[q[0]], points[q[1]], points[q[2]], points[q[3]]));
  }
  return out;
}

std::vector<Cplx> crossRatioChart(const LabeledPointsD& points, const Triangulation& T) {
  std::vector<Cplx> out;
  for (const auto& arc : T.arcs) {
    auto q = arcQuadrilateral(T, arc);
    out.push_back(crossRatioD(points[q[0]], points[q[1]], points[q[2]], points[q[3]]));
  }
  return out;
}

LabeledPointsQ reconstructPoints(const Triangulation& T, const QCVec& x) {
  for (const auto& xi : x)
    if (xi.isZero()) throw std::invalid_argument("reconstructPoints: zero coordinate");
  auto fs = faces(T);
  std::sort(fs.begin(), fs.end());
  LabeledPointsQ pts(T.m, PPq{QC(Rat(0)), QC(Rat(0))});
  std::vector<bool> known(T.m, false);

  auto assign = [&](int v, const PPq& p) {
    pts[v] = p;
    known[v] = true;
  };
  assign(fs[0][0], ppInfinityQ());
  assign(fs[0][1], PPq{QC(Rat(-1)), QC(Rat(1))});
  assign(fs[0][2], PPq{QC(Rat(0)), QC(Rat(1))});

  // Walk the remaining faces; each new face shares an arc with a processed
  // one and contributes one new vertex, solved from the arc's cross-ratio.
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& f : fs) {
      int unknown = -1, cnt = 0;
      for (int v : f)
        if (!known[v]) {
          unknown = v;
          ++cnt;
        }
      if (cnt != 1) continue;
      // Find the arc of this face whose quadrilateral involves the unknown
      // vertex as the off-face corner and has its other three points known.
      bool solved = false;
      for (const auto& arc : T.arcs) {
        if (T.arcIndex(arc) < 0) continue;
        auto quad = arcQuadrilateral(T, arc);
        int pos = -1;
        for (int l = 0; l < 4; ++l)
          if (quad[l] == unknown) pos = l;
        if (pos < 0) continue;
        bool othersKnown = true;
        for (int l = 0; l < 4; ++l)
          if (l != pos && !known[quad[l]]) othersKnown = false;
        if (!othersKnown) continue;
        const QC& xr = x[T.arcIndex(arc)];
        const PPq& p1 = pts[quad[0]];
        const PPq& p2 = pts[quad[1]];
        const PPq& p3 = pts[quad[2]];
        const PPq& p4 = pts[quad[3]];
        PPq z;
        if (pos == 3) {
          // CR(p1,p2,p3,Z) = x: [d12*a3 - x*d23*a1 : d12*b3 - x*d23*b1]
          QC d12 = det2(p1, p2), d23 = det2(p2, p3);
          z = {d12 * p3.a - xr * d23 * p1.a, d12 * p3.b - xr * d23 * p1.b};
        } else if (pos == 1) {
          // CR(p1,Z,p3,p4) = x: [a1*d34 + x*a3*d14 : b1*d34 + x*b3*d14]
          QC d34 = det2(p3, p4), d14 = det2(p1, p4);
          z = {p1.a * d34 + xr * p3.a * d14, p1.b * d34 + xr * p3.b * d14};
        } else if (pos == 0) {
          // CR(Z,p2,p3,p4) = x: d_Z2 * d34 = x * d23 * d_Z4
          // => Z ~ [a2*d34 - x*a4*d23 : b2*d34 - x*b4*d23]
          QC d34 = det2(p3, p4), d23 = det2(p2, p3);
          z = {p2.a * d34 - xr * p4.a * d23, p2.b * d34 - xr * p4.b * d23};
        } else {
          // CR(p1,p2,Z,p4) = x: d12 * d_Z4 = x * d_2Z * d14
          // => Z ~ [d12*a4 + x*d14*a2 : d12*b4 + x*d14*b2]
          QC d12 = det2(p1, p2), d14 = det2(p1, p4);
          z = {d12 * p4.a + xr * d14 * p2.a, d12 * p4.b + xr * d14 * p2.b};
        }
        if (z.a.isZero() && z.b.isZero())
          throw DegenerateQuadrilateral("reconstruction degenerated");
        assign(unknown, z);
        solved = true;
        break;
      }
      if (solved) progress = true;
    }
  }
  for (int v = 0; v < T.m; ++v)
    if (!known[v]) throw std::logic_error("reconstructPoints: vertex left unsolved");
  return pts;
}

bool inM0(const LabeledPointsD& p, double tol) {
  int m = static_cast<int>(p.size());
  auto distinct = [&](const PPd& u, const PPd& v) {
    Cplx d = det2(u, v);
    double nu = std::abs(u.a) + std::abs(u.b);
    double nv = std::abs(v.a) + std::abs(v.b);
    return std::abs(d) > tol * nu * nv;
  };
  for (int j = 0; j < m; ++j)
    if (!distinct(p[j], p[(j + 1) % m])) return false;
  int distinctCount = 0;
  for (int j = 0; j < m; ++j) {
    bool fresh = true;
    for (int l = 0; l < j; ++l)
      if (!distinct(p[j], p[l])) fresh = false;
    if (fresh) ++distinctCount;
  }
  return distinctCount >= 3;
}

Cplx ApexPolynomial::eval(Cplx x) const {
  // Horner on x^{n+1} + 0*x^n + a_{n-1} x^{n-1} + ... + a_0.
  Cplx v = x;
  for (int k = n - 1; k >= 0; --k) v = v * x + coeffs[k];
  return v;
}

Cplx ApexPolynomial::deriv(Cplx x) const {
  // (n+1) x^n + 0*x^{n-1} + sum_{k>=1} k a_k x^{k-1}.
  Cplx v = Cplx(static_cast<double>(n + 1)) * x;
  for (int k = n - 1; k >= 1; --k) v = v * x + Cplx(static_cast<double>(k)) * coeffs[k];
  return v;
}

namespace {

// sqrt branch continuation helper: pick the square root of z closest to ref.
Cplx sqrtNear(Cplx z, Cplx ref) {
  Cplx s = std::sqrt(z);
  return std::abs(s - ref) <= std::abs(-s - ref) ? s : -s;
}

struct Dopri5 {
  // Dormand-Prince 5(4) coefficients.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                          e7 = -1.0 / 40;
};

using State = std::array<Cplx, 2>;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> ks) {
  State out = y;
  for (const auto& [c, k] : ks) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

}  // namespace

double wkbAction(const ApexPolynomial& q, double R, int j) {
  int m = q.polygonSize();
  double theta = kTwoPi * j / m;
  Cplx dir(std::cos(theta), std::sin(theta));
  // Continuity of the branch from r = R inward; start with the decaying
  // branch at R (positive outward derivative of the action).
  int steps = 4000;
  Cplx x0 = R * dir;
  Cplx s = std::sqrt(q.eval(x0));
  if ((s * dir).real() < 0) s = -s;
  double action = 0;
  Cplx prev = s;
  double h = R / steps;
  double fPrev = (prev * dir).real();
  for (int i = steps - 1; i >= 0; --i) {
    Cplx x = (h * i) * dir;
    Cplx cur = sqrtNear(q.eval(x), prev);
    double f = (cur * dir).real();
    action += 0.5 * (f + fPrev) * h;
    fPrev = f;
    prev = cur;
  }
  return action;
}

LabeledPointsD stokesLines(const ApexPolynomial& q, double R, const StokesOptions& opts,
                           int jobs) {
  int m = q.polygonSize();
  LabeledPointsD lines(m);
  std::vector<std::string> failures(m);

  for (int j = 0; j < m; ++j) {
    double action = wkbAction(q, R, j);
    if (action < opts.minWkbAction)
      throw RadiusTooSmall("sector " + std::to_string(j) + ": WKB action " +
                           std::to_string(action) + " < " + std::to_string(opts.minWkbAction));
  }

  auto solveSector = [&](int j) {
    try {
      double theta = kTwoPi * j / m;
      Cplx dir(std::cos(theta), std::sin(theta));
      Cplx x0 = R * dir;
      Cplx s0 = std::sqrt(q.eval(x0));
      if ((s0 * dir).real() < 0) s0 = -s0;
      State y{Cplx(1.0), -s0 - q.deriv(x0) / (4.0 * q.eval(x0))};

      // Integrate Y' = f(tau, Y) with x(tau) = x0 (1 - tau), tau in [0, 1].
      auto f = [&](double tau, const State& Y) -> State {
        Cplx x = x0 * (1.0 - tau);
        return {-x0 * Y[1], -x0 * (q.eval(x) * Y[0])};
      };
      double tau = 0.0, h = 1e-4;
      State k1 = f(tau, y);
      while (tau < 1.0) {
        if (tau + h > 1.0) h = 1.0 - tau;
        State k2 = f(tau + Dopri5::c2 * h, axpy(y, h, {{Dopri5::a21, &k1}}));
        State k3 = f(tau + Dopri5::c3 * h, axpy(y, h, {{Dopri5::a31, &k1}, {Dopri5::a32, &k2}}));
        State k4 = f(tau + Dopri5::c4 * h,
                     axpy(y, h, {{Dopri5::a41, &k1}, {Dopri5::a42, &k2}, {Dopri5::a43, &k3}}));
        State k5 = f(tau + Dopri5::c5 * h, axpy(y, h, {{Dopri5::a51, &k1},
                                                       {Dopri5::a52, &k2},
                                                       {Dopri5::a53, &k3},
                                                       {Dopri5::a54, &k4}}));
        State k6 = f(tau + h, axpy(y, h, {{Dopri5::a61, &k1},
                                          {Dopri5::a62, &k2},
                                          {Dopri5::a63, &k3},
                                          {Dopri5::a64, &k4},
                                          {Dopri5::a65, &k5}}));
        State y5 = axpy(y, h, {{Dopri5::b1, &k1},
                               {Dopri5::b3, &k3},
                               {Dopri5::b4, &k4},
                               {Dopri5::b5, &k5},
                               {Dopri5::b6, &k6}});
        State k7 = f(tau + h, y5);
        double err = 0, scale = 0;
        for (int c = 0; c < 2; ++c) {
          Cplx e = h * (Dopri5::e1 * k1[c] + Dopri5::e3 * k3[c] + Dopri5::e4 * k4[c] +
                        Dopri5::e5 * k5[c] + Dopri5::e6 * k6[c] + Dopri5::e7 * k7[c]);
          double sc = opts.atol + opts.rtol * std::max(std::abs(y[c]), std::abs(y5[c]));
          err = std::max(err, std::abs(e) / sc);
          scale = std::max(scale, std::abs(y5[c]));
        }
        if (err <= 1.0) {
          tau += h;
          y = y5;
          k1 = k7;  // FSAL
          if (scale > 1e250) {
            double inv = 1.0 / scale;
            y[0] *= inv;
            y[1] *= inv;
            k1 = f(tau, y);
          }
        }
        double fac = 0.9 * std::pow(err > 1e-10 ? err : 1e-10, -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        if (h < opts.hMin)
          throw IntegratorFailure("sector " + std::to_string(j) + ": step underflow");
      }
      lines[j] = PPd{y[0], y[1]};
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
  };

  if (jobs <= 1) {
    for (int j = 0; j < m; ++j) solveSector(j);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < std::min(jobs, m); ++w)
      pool.emplace_back([&] {
        int j;
        while ((j = next.fetch_add(1)) < m) solveSector(j);
      });
    for (auto& th : pool) th.join();
  }
  for (int j = 0; j < m; ++j)
    if (!failures[j].empty()) throw IntegratorFailure(failures[j]);
  return lines;
}

std::vector<Cplx> stokesToCluster(const LabeledPointsD& lines, const Triangulation& T) {
  return crossRatioChart(lines, T);
}

ApexPolynomial scalingAction(Cplx s, const ApexPolynomial& q) {
  ApexPolynomial out = q;
  int m = q.polygonSize();
  for (int k = 0; k < q.n; ++k)
    out.coeffs[k] *= std::exp(2.0 * s * static_cast<double>(m - k - 2) / static_cast<double>(m));
  return out;
}

ApexPolynomial zmAction(const ApexPolynomial& q) {
  ApexPolynomial out = q;
  int m = q.polygonSize();
  for (int k = 0; k < q.n; ++k) {
    double ang = kTwoPi * (k + 2) / m;
    out.coeffs[k] *= Cplx(std::cos(ang), std::sin(ang));
  }
  return out;
}

Cplx discriminant(const ApexPolynomial& q) {
  // Resultant of q and q' via the Sylvester matrix, over complex doubles.
  int d = q.n + 1;
  std::vector<Cplx> p(d + 1), dp(d);
  p[0] = 1.0;
  p[1] = 0.0;
  for (int k = 0; k < q.n; ++k) p[d - k] = q.coeffs[k];
  for (int k = 0; k <= d - 1; ++k) dp[k] = p[k] * static_cast<double>(d - k);
  int N = 2 * d - 1;
  Mat<Cplx> S(N, N);
  for (int r = 0; r < d - 1; ++r)
    for (int c = 0; c <= d; ++c) S(r, r + c) = p[c];
  for (int r = 0; r < d; ++r)
    for (int c = 0; c <= d - 1; ++c) S(d - 1 + r, r + c) = dp[c];
  // LU determinant with partial pivoting.
  Cplx det = 1.0;
  for (int c = 0; c < N; ++c) {
    int piv = -1;
    double best = 0;
    for (int r = c; r < N; ++r)
      if (std::abs(S(r, c)) > best) {
        best = std::abs(S(r, c));
        piv = r;
      }
    if (piv < 0 || best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < N; ++j) std::swap(S(piv, j), S(c, j));
      det = -det;
    }
    det *= S(c, c);
    for (int r = c + 1; r < N; ++r) {
      Cplx f = S(r, c) / S(c, c);
      for (int j = c; j < N; ++j) S(r, j) -= f * S(c, j);
    }
  }
  // disc = (-1)^{d(d-1)/2} resultant / lc.
  int sign = ((d * (d - 1) / 2) % 2 == 0) ? 1 : -1;
  return static_cast<double>(sign) * det;
}

LabeledPointsD applyMoebius(const LabeledPointsD& pts, Cplx A, Cplx B, Cplx C, Cplx D) {
  LabeledPointsD out;
  for (const auto& p : pts) out.push_back(PPd{A * p.a + B * p.b, C * p.a + D * p.b});
  return out;
}

namespace {

// Gauss(7)/Kronrod(15) rule on [-1, 1], derived at startup: Gauss nodes are
// Legendre P7 roots, the Kronrod extension nodes are the roots of the
// Stieltjes polynomial E8 (coefficients solved exactly), and all weights are
// interpolatory.
struct GkRule {
  std::array<double, 15> node;
  std::array<double, 15> wk;  // Kronrod weights
  std::array<double, 15> wg;  // Gauss weights on the embedded nodes, 0 elsewhere
};

// Coefficients of Legendre P_n (monic-free, standard normalization), exact.
std::vector<Rat> legendreCoeffs(int nDeg) {
  // P_0 = 1, P_1 = x, (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
  std::vector<std::vector<Rat>> P(nDeg + 1);
  P[0] = {Rat(1)};
  if (nDeg >= 1) P[1] = {Rat(0), Rat(1)};
  for (int k = 1; k < nDeg; ++k) {
    std::vector<Rat> next(k + 2, Rat(0));
    for (size_t i = 0; i < P[k].size(); ++i) next[i + 1] += Rat(2 * k + 1, k + 1) * P[k][i];
    for (size_t i = 0; i < P[k - 1].size(); ++i) next[i] -= Rat(k, k + 1) * P[k - 1][i];
    P[k + 1] = next;
  }
  return P[nDeg];
}

// int_{-1}^{1} x^k dx.
Rat monomialMoment(int k) { return (k % 2) ? Rat(0) : Rat(2, k + 1); }

double polyEvalD(const std::vector<double>& c, double x) {
  double v = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * x + c[i];
  return v;
}

std::vector<double> polyDerivD(const std::vector<double>& c) {
  std::vector<double> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

// All real roots in (-1,1) of a polynomial with simple roots, via sign-change
// bisection plus Newton polish.
std::vector<double> rootsIn01Sym(const std::vector<double>& c) {
  std::vector<double> roots;
  auto d = polyDerivD(c);
  int grid = 4000;
  double prevX = -1.0, prevV = polyEvalD(c, prevX);
  for (int i = 1; i <= grid; ++i) {
    double x = -1.0 + 2.0 * i / grid;
    double v = polyEvalD(c, x);
    if (prevV == 0.0) roots.push_back(prevX);
    if (prevV * v < 0) {
      double lo = prevX, hi = x;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double vm = polyEvalD(c, mid);
        if (vm == 0.0) { lo = hi = mid; break; }
        if (vm * polyEvalD(c, lo) < 0)
          hi = mid;
        else
          lo = mid;
      }
      double r = 0.5 * (lo + hi);
      for (int it = 0; it < 4; ++it) {
        double f = polyEvalD(c, r), fp = polyEvalD(d, r);
        if (fp != 0.0) r -= f / fp;
      }
      roots.push_back(r);
    }
    prevX = x;
    prevV = v;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Interpolatory weights for the node set: w_i = int ell_i(x) dx.
std::vector<double> interpolatoryWeights(const std::vector<double>& nodes) {
  int n = static_cast<int>(nodes.size());
  // Nodal polynomial coefficients.
  std::vector<double> omega{1.0};
  for (double x : nodes) {
    std::vector<double> next(omega.size() + 1, 0.0);
    for (size_t i = 0; i < omega.size(); ++i) {
      next[i + 1] += omega[i];
      next[i] -= x * omega[i];
    }
    omega = next;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    // ell_i = omega / ((x - x_i) * omega'(x_i)); synthetic division.
    std::vector<double> quo(omega.size() - 1, 0.0);
    double carry = omega.back();
    for (int d = static_cast<int>(omega.size()) - 2; d >= 0; --d) {
      quo[d] = carry;
      carry = omega[d] + carry * nodes[i];
    }
    double denom = polyEvalD(quo, nodes[i]);
    double integral = 0;
    for (size_t d = 0; d < quo.size(); ++d)
      integral += quo[d] * toDouble(monomialMoment(static_cast<int>(d)));
    w[i] = integral / denom;
  }
  return w;
}

const GkRule& gkRule() {
  static GkRule rule = [] {
    GkRule r{};
    auto p7 = legendreCoeffs(7);
    std::vector<double> p7d(p7.size());
    for (size_t i = 0; i < p7.size(); ++i) p7d[i] = toDouble(p7[i]);
    std::vector<double> gauss = rootsIn01Sym(p7d);

    // Stieltjes E8(x) = x^8 + a6 x^6 + a4 x^4 + a2 x^2 + a0, orthogonal to
    // x^k P7(x) for k = 0..7 (odd k conditions are automatic by parity).
    QMat A(4, 4);
    RatVec b(4);
    int row = 0;
    for (int k = 1; k <= 7; k += 2) {
      // int E8(x) x^k P7 dx = 0.
      RatVec coef(4, Rat(0));
      Rat rhs(0);
      for (int e = 0; e <= 8; e += 2) {
        Rat mom(0);
        for (size_t i = 0; i < p7.size(); ++i)
          if (p7[i] != 0) mom += p7[i] * monomialMoment(e + k + static_cast<int>(i));
        if (e == 8)
          rhs -= mom;
        else
          coef[e / 2] = mom;
      }
      for (int c = 0; c < 4; ++c) A(row, c) = coef[c];
      b[row] = rhs;
      ++row;
    }
    auto sol = solveExact(A, b);
    if (!sol) throw std::logic_error("gkRule: Stieltjes system is singular");
    std::vector<double> e8{toDouble((*sol)[0]), 0, toDouble((*sol)[1]), 0, toDouble((*sol)[2]),
                           0, toDouble((*sol)[3]), 0, 1.0};
    std::vector<double> kron = rootsIn01Sym(e8);

    std::vector<double> nodes = gauss;
    nodes.insert(nodes.end(), kron.begin(), kron.end());
    std::sort(nodes.begin(), nodes.end());
    auto wkAll = interpolatoryWeights(nodes);
    auto wgGauss = interpolatoryWeights(gauss);
    for (int i = 0; i < 15; ++i) {
      r.node[i] = nodes[i];
      r.wk[i] = wkAll[i];
      r.wg[i] = 0.0;
      for (size_t g = 0; g < gauss.size(); ++g)
        if (std::fabs(nodes[i] - gauss[g]) < 1e-12) r.wg[i] = wgGauss[g];
    }
    return r;
  }();
  return rule;
}

template <class F>
Cplx gk15Segment(const F& f, double a, double b, double* errOut) {
  const GkRule& r = gkRule();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Cplx k(0.0), g(0.0);
  for (int i = 0; i < 15; ++i) {
    Cplx v = f(mid + half * r.node[i]);
    k += r.wk[i] * v;
    if (r.wg[i] != 0.0) g += r.wg[i] * v;
  }
  if (errOut) *errOut = std::abs(k - g) * half;
  return k * half;
}

template <class F>
Cplx gk15Adaptive(const F& f, double a, double b, double tol, int depth = 0) {
  double err = 0;
  Cplx whole = gk15Segment(f, a, b, &err);
  if (err < tol || depth > 30) return whole;
  double mid = 0.5 * (a + b);
  return gk15Adaptive(f, a, mid, tol / 2, depth + 1) +
         gk15Adaptive(f, mid, b, tol / 2, depth + 1);
}

}  // namespace

Cplx periodIntegral(const ApexPolynomial& q, Cplx z1, Cplx z2, double tol) {
  int d = q.n + 1;
  // q as a coefficient vector (descending), deflated by (x - z1)(x - z2).
  std::vector<Cplx> c(d + 1);
  c[0] = 1.0;
  c[1] = 0.0;
  for (int k = 0; k < q.n; ++k) c[d - k] = q.coeffs[k];
  double scale = 0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  auto deflate = [&](std::vector<Cplx> poly, Cplx z) {
    std::vector<Cplx> out(poly.size() - 1);
    Cplx carry = 0.0;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
      carry = carry * z + poly[i];
      out[i] = carry;
    }
    Cplx rem = carry * z + poly.back();
    if (std::abs(rem) > 1e-8 * std::max(1.0, scale))
      throw PathThroughRoot("endpoint is not a root of q (remainder " +
                            std::to_string(std::abs(rem)) + ")");
    return out;
  };
  std::vector<Cplx> r = deflate(deflate(c, z1), z2);

  Cplx span = z2 - z1;
  auto fOf = [&](double u) {
    // f(u) = -(z2-z1)^2 * r(x(u)); sqrt(q) = sqrt(u(1-u)) * sqrt(f).
    Cplx x = z1 + span * u;
    Cplx rv = 0.0;
    for (const auto& cr : r) rv = rv * x + cr;
    return -span * span * rv;
  };

  // Track the square-root branch of f along [0, 1], principal at u = 1/2.
  int gridN = 1 << 12;
  std::vector<Cplx> sqrtGrid(gridN + 1);
  int midIdx = gridN / 2;
  Cplx fm = fOf(0.5);
  if (std::abs(fm) < 1e-12 * std::max(1.0, scale))
    throw PathThroughRoot("segment passes through another root of q");
  if (fm.imag() == 0.0) fm = Cplx(fm.real(), 0.0);  // land on the +0 side of the cut
  sqrtGrid[midIdx] = std::sqrt(fm);
  for (int i = midIdx + 1; i <= gridN; ++i) {
    Cplx fv = fOf(static_cast<double>(i) / gridN);
    if (std::abs(fv) < 1e-12 * std::max(1.0, scale))
      throw PathThroughRoot("segment passes through another root of q");
    sqrtGrid[i] = sqrtNear(fv, sqrtGrid[i - 1]);
  }
  for (int i = midIdx - 1; i >= 0; --i) {
    Cplx fv = fOf(static_cast<double>(i) / gridN);
    if (std::abs(fv) < 1e-12 * std::max(1.0, scale))
      throw PathThroughRoot("segment passes through another root of q");
    sqrtGrid[i] = sqrtNear(fv, sqrtGrid[i + 1]);
  }
  auto sqrtF = [&](double u) {
    int i = std::min(gridN, std::max(0, static_cast<int>(std::lround(u * gridN))));
    return sqrtNear(fOf(u), sqrtGrid[i]);
  };

  // Substitution u = (1 - cos t)/2 removes the endpoint square-root weight:
  // int sqrt(q) dx = (z2 - z1) * int_0^pi sin(t)^2/4 * sqrt(f(u(t))) dt.
  auto integrand = [&](double t) {
    double st = std::sin(t);
    double u = 0.5 * (1.0 - std::cos(t));
    return span * (st * st / 4.0) * sqrtF(u);
  };
  return gk15Adaptive(integrand, 0.0, kPi, tol);
}

}  // namespace cstab
