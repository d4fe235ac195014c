#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cstab/anmodel.hpp"
#include "cstab/charts.hpp"
#include "cstab/rng.hpp"

using namespace cstab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("flips: frozen pentagon example and involution") {
  Triangulation T{5, {{0, 2}, {0, 3}}};
  REQUIRE(T.valid());
  Triangulation F = flipArc(T, {0, 2});
  CHECK(F.arcs == std::vector<Arc>{{0, 3}, {1, 3}});
  CHECK(flipArc(F, {1, 3}).arcs == T.arcs);
  CHECK_THROWS_AS(flipArc(T, {1, 3}), ArcNotPresent);
}

TEST_CASE("triangulation enumeration counts") {
  CHECK(enumerateTriangulations(4).size() == 2);
  CHECK(enumerateTriangulations(5).size() == 5);
  CHECK(enumerateTriangulations(6).size() == 14);
  CHECK(enumerateTriangulations(7).size() == 42);
}

TEST_CASE("quiver of a triangulation") {
  // Star triangulation: coherent A_{m-3} orientation.
  for (int m : {5, 6, 7}) {
    Triangulation star = fanTriangulation(m);
    ExchangeMatrix B = quiverOfTriangulation(star);
    CHECK(B.skewSymmetric());
    for (int i = 0; i + 1 < B.n; ++i) {
      CHECK(std::abs(B.v(i, i + 1)) == 1);
      if (i > 0) CHECK(B.v(i - 1, i) == B.v(i, i + 1));  // coherent
    }
    for (int i = 0; i < B.n; ++i)
      for (int j = i + 2; j < B.n; ++j) CHECK(B.v(i, j) == 0);  // no common triangle
  }
  // Pentagon fan: A2 with |v01| = 1.
  ExchangeMatrix B5 = quiverOfTriangulation(fanTriangulation(5));
  CHECK(std::abs(B5.v(0, 1)) == 1);
}

TEST_CASE("flip graph matches the exchange graph (m = 5, 6)") {
  for (int m : {5, 6}) {
    ExchangeGraph flips = flipExchangeGraph(m);
    ExchangeGraph E = enumerateExchangeGraph(namedQuiver(m == 5 ? "a2" : "a3"));
    CHECK(flips.vertexCount() == E.vertexCount());
    CHECK(flips.undirectedEdgeCount() == E.undirectedEdgeCount());
    CHECK(!findIsomorphisms(flips, E).empty());
  }
}

TEST_CASE("cross-ratio: m = 4 normalisation and degenerate input") {
  Triangulation T{4, {{0, 2}}};
  LabeledPointsQ pts{ppInfinityQ(), PPq{QC(Rat(-1)), QC(Rat(1))}, ppOf(QC(Rat(0))),
                     ppOf(QC(Rat(7, 3)))};
  QCVec x = crossRatioChart(pts, T);
  REQUIRE(x.size() == 1);
  CHECK(x[0] == QC(Rat(7, 3)));
  // Coincident adjacent corners degenerate (the denominator vanishes).
  LabeledPointsQ bad = pts;
  bad[1] = bad[2];
  CHECK_THROWS_AS(crossRatioChart(bad, T), DegenerateQuadrilateral);
}

TEST_CASE("cross-ratio: Moebius invariance (exact)") {
  Rng rng(43);
  Triangulation T{6, {{0, 2}, {0, 4}, {2, 4}}};
  REQUIRE(T.valid());
  for (int trial = 0; trial < 20; ++trial) {
    LabeledPointsQ pts;
    for (int v = 0; v < 6; ++v)
      pts.push_back(ppOf(QC(Rat(3 * v) + rng.positiveRational(), rng.smallRational(5, 3))));
    QCVec x0;
    try {
      x0 = crossRatioChart(pts, T);
    } catch (const DegenerateQuadrilateral&) {
      continue;
    }
    // Random invertible exact Moebius transform.
    QC A(rng.nonzeroRational()), B(rng.smallRational(5, 3), rng.smallRational(5, 3));
    QC C(rng.smallRational(5, 3)), D(rng.nonzeroRational(), rng.smallRational(5, 3));
    if ((A * D - B * C).isZero()) continue;
    LabeledPointsQ moved;
    for (const auto& p : pts) moved.push_back(PPq{A * p.a + B * p.b, C * p.a + D * p.b});
    QCVec x1 = crossRatioChart(moved, T);
    for (size_t i = 0; i < x0.size(); ++i) CHECK(x0[i] == x1[i]);
  }
}

TEST_CASE("cross-ratio: increasing real points give positive coordinates") {
  Rng rng(47);
  for (const auto& arcs :
       {std::vector<Arc>{{0, 2}, {0, 3}}, std::vector<Arc>{{0, 3}, {1, 3}}}) {
    Triangulation T{5, arcs};
    REQUIRE(T.valid());
    for (int trial = 0; trial < 25; ++trial) {
      LabeledPointsQ pts;
      Rat cur(0);
      for (int v = 0; v < 5; ++v) {
        cur += rng.positiveRational();
        pts.push_back(ppOf(QC(cur)));
      }
      QCVec x = crossRatioChart(pts, T);
      for (const auto& z : x) {
        CHECK(z.im == 0);
        CHECK(z.re > 0);
      }
    }
  }
}

TEST_CASE("reconstruction: exact round trip and m = 4 pinning") {
  Rng rng(53);
  Triangulation T4{4, {{0, 2}}};
  QCVec x{QC(Rat(5, 2), Rat(1, 3))};
  LabeledPointsQ pts = reconstructPoints(T4, x);
  // (inf, -1, 0, x).
  CHECK(pts[0].b.isZero());
  CHECK(pts[1].a / pts[1].b == QC(Rat(-1)));
  CHECK(pts[2].a.isZero());
  CHECK(pts[3].a / pts[3].b == x[0]);

  for (int m : {5, 6}) {
    std::vector<Triangulation> tris = enumerateTriangulations(m);
    for (int trial = 0; trial < 20; ++trial) {
      const Triangulation& T = tris[trial % tris.size()];
      QCVec xr;
      for (int i = 0; i < m - 3; ++i) xr.push_back(QC(rng.nonzeroRational(), rng.smallRational(4, 3)));
      LabeledPointsQ rec;
      QCVec back;
      try {
        rec = reconstructPoints(T, xr);
        back = crossRatioChart(rec, T);
      } catch (const DegenerateQuadrilateral&) {
        continue;
      }
      for (int i = 0; i < m - 3; ++i) CHECK(back[i] == xr[i]);
    }
  }
}

TEST_CASE("real positive coordinates reconstruct to ordered boundary points") {
  Rng rng(59);
  Triangulation T{5, {{0, 2}, {0, 3}}};
  for (int trial = 0; trial < 20; ++trial) {
    QCVec x{QC(rng.positiveRational()), QC(rng.positiveRational())};
    LabeledPointsQ rec = reconstructPoints(T, x);
    // All points real (or infinity).
    for (const auto& p : rec) {
      QC cross = p.a * p.b.conj();
      CHECK(cross.im == 0);
    }
  }
}

TEST_CASE("flipping an arc transforms the chart by the birational rule (exact)") {
  Rng rng(61);
  for (int m : {5, 6}) {
    std::vector<Triangulation> tris = enumerateTriangulations(m);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
      const Triangulation& T = tris[trial % tris.size()];
      int k = static_cast<int>(rng.intIn(0, m - 4));
      QCVec x;
      for (int i = 0; i < m - 3; ++i)
        x.push_back(QC(rng.nonzeroRational(), rng.smallRational(4, 3)));
      Triangulation F = flipArc(T, T.arcs[k]);
      LabeledPointsQ pts;
      QCVec before, after;
      try {
        pts = reconstructPoints(T, x);
        before = crossRatioChart(pts, T);
        after = crossRatioChart(pts, F);
      } catch (const DegenerateQuadrilateral&) {
        continue;
      }
      // Arc-level correspondence: position of each untouched arc in F, and
      // the flipped arc goes to the new arc's position.
      auto quad = arcQuadrilateral(T, T.arcs[k]);
      Arc newArc{std::min(quad[1], quad[3]), std::max(quad[1], quad[3])};
      QCVec transformed = xEdgeTransition(quiverOfTriangulation(T), k, before);
      for (int j = 0; j < m - 3; ++j) {
        int pos = F.arcIndex(j == k ? newArc : T.arcs[j]);
        REQUIRE(pos >= 0);
        CHECK(after[pos] == transformed[j]);
      }
      ++checked;
    }
    CHECK(checked >= 20);
  }
}

TEST_CASE("apex polynomial evaluation") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(0.0)}};  // x^3
  CHECK(std::abs(q.eval({2.0, 0.0}) - Cplx(8.0)) < 1e-14);
  CHECK(std::abs(q.deriv({2.0, 0.0}) - Cplx(12.0)) < 1e-14);
  ApexPolynomial r{1, {Cplx(-1.0)}};  // x^2 - 1
  CHECK(std::abs(r.eval({3.0, 0.0}) - Cplx(8.0)) < 1e-14);
  CHECK(std::abs(r.deriv({3.0, 0.0}) - Cplx(6.0)) < 1e-14);
  CHECK(r.polygonSize() == 4);
}

TEST_CASE("wkb action grows with the radius") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(0.0)}};  // x^3, action = (2/5) R^{5/2}
  for (int j = 0; j < 5; ++j) {
    double a6 = wkbAction(q, 6.0, j);
    CHECK(std::abs(a6 - 0.4 * std::pow(6.0, 2.5)) < 1e-3);
    CHECK(wkbAction(q, 9.0, j) > a6);
  }
}

TEST_CASE("stokes: radius guard") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(0.0)}};
  CHECK_THROWS_AS(stokesLines(q, 2.0), RadiusTooSmall);
}

TEST_CASE("stokes: the cubic gives the Z_5-symmetric cluster point") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(0.0)}};  // q = x^3, m = 5
  double R = 6.5;
  LabeledPointsD lines = stokesLines(q, R);
  CHECK(inM0(lines));
  // All coordinates over the rotation orbit of the fan triangulation agree,
  // and equal the golden ratio (the fixed point of the exchange recurrence).
  std::vector<Cplx> values;
  for (int v = 0; v < 5; ++v) {
    auto x = stokesToCluster(lines, fanTriangulation(5, v));
    values.insert(values.end(), x.begin(), x.end());
  }
  // Fixed point of the symmetric exchange recurrence: y^2 + y = 1, y > 0.
  double fix = (std::sqrt(5.0) - 1.0) / 2.0;
  for (const auto& z : values) CHECK(std::abs(z - Cplx(fix)) < 1e-6);
  // Two radii agree.
  LabeledPointsD lines2 = stokesLines(q, 1.5 * R);
  auto xa = stokesToCluster(lines, fanTriangulation(5));
  auto xb = stokesToCluster(lines2, fanTriangulation(5));
  for (size_t i = 0; i < xa.size(); ++i) CHECK(std::abs(xa[i] - xb[i]) < 1e-6);
  // PGL2 frame invariance.
  LabeledPointsD moved = applyMoebius(lines, {1.3, 0.4}, {0.2, -0.7}, {0.1, 0.05}, {0.9, -0.2});
  auto xc = stokesToCluster(moved, fanTriangulation(5));
  for (size_t i = 0; i < xa.size(); ++i) CHECK(std::abs(xa[i] - xc[i]) < 1e-8);
}

TEST_CASE("stokes: real coefficients give conjugation symmetry") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(-1.0)}};  // x^3 - x
  LabeledPointsD lines = stokesLines(q, 6.5);
  int m = q.polygonSize();
  // p(-j) = conj(p(j)) as points of P^1.
  for (int j = 0; j < m; ++j) {
    const PPd& a = lines[(m - j) % m];
    const PPd& b = lines[j];
    Cplx da = a.a / a.b, db = std::conj(b.a / b.b);
    CHECK(std::abs(da - db) < 1e-6 * std::max(1.0, std::abs(da)));
  }
}

TEST_CASE("stokes: coefficient continuity under small perturbation") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(0.0)}};
  ApexPolynomial q2{2, {Cplx(1e-3, 0.0), Cplx(0.0)}};
  auto xa = stokesToCluster(stokesLines(q, 6.5), fanTriangulation(5));
  auto xb = stokesToCluster(stokesLines(q2, 6.5), fanTriangulation(5));
  for (size_t i = 0; i < xa.size(); ++i) CHECK(std::abs(xa[i] - xb[i]) < 0.05);
}

TEST_CASE("scaling action") {
  ApexPolynomial q{2, {Cplx(0.3, -0.2), Cplx(1.1, 0.7)}};
  int m = q.polygonSize();
  // s = 0 is the identity.
  ApexPolynomial s0 = scalingAction({0.0, 0.0}, q);
  for (int k = 0; k < q.n; ++k) CHECK(std::abs(s0.coeffs[k] - q.coeffs[k]) < 1e-15);
  // e^{2s/m} = omega: the scaling equals the inverse Z_m generator.
  Cplx s(0.0, kPi);  // e^{2 s / m} = e^{2 pi i / m} = omega
  ApexPolynomial qs = scalingAction(s, q);
  ApexPolynomial qz = q;
  for (int rep = 0; rep < m - 1; ++rep) qz = zmAction(qz);
  for (int k = 0; k < q.n; ++k)
    CHECK(std::abs(qs.coeffs[k] - qz.coeffs[k]) < 1e-12 * std::max(1.0, std::abs(qz.coeffs[k])));
  // Discriminant homogeneity: disc(q_s) = e^{2 s (m-2)(m-3)/m} disc(q).
  Cplx s2(0.37, 0.21);
  Cplx lhs = discriminant(scalingAction(s2, q));
  Cplx rhs = std::exp(2.0 * s2 * static_cast<double>((m - 2) * (m - 3)) / static_cast<double>(m)) *
             discriminant(q);
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
}

TEST_CASE("period integral: q = x^2 - 1 gives +- i pi / 2") {
  ApexPolynomial q{1, {Cplx(-1.0)}};
  Cplx fwd = periodIntegral(q, {-1.0, 0.0}, {1.0, 0.0});
  CHECK(std::abs(fwd - Cplx(0.0, kPi / 2)) < 1e-8);
  Cplx bwd = periodIntegral(q, {1.0, 0.0}, {-1.0, 0.0});
  CHECK(std::abs(bwd + fwd) < 1e-10);
}

TEST_CASE("period integral: homogeneity in the root location") {
  for (double c : {0.5, 2.0, 3.5}) {
    ApexPolynomial q{1, {Cplx(-c * c)}};  // x^2 - c^2
    Cplx val = periodIntegral(q, {-c, 0.0}, {c, 0.0});
    CHECK(std::abs(val - Cplx(0.0, c * c * kPi / 2)) < 1e-8 * std::max(1.0, c * c));
  }
}

TEST_CASE("period integral: guards") {
  ApexPolynomial q{2, {Cplx(0.0), Cplx(-1.0)}};  // x^3 - x, roots -1, 0, 1
  CHECK_THROWS_AS(periodIntegral(q, {-1.0, 0.0}, {1.0, 0.0}), PathThroughRoot);  // through 0
  CHECK_THROWS_AS(periodIntegral(q, {-1.0, 0.0}, {0.5, 0.0}), PathThroughRoot);  // not a root
  Cplx ok = periodIntegral(q, {0.0, 0.0}, {1.0, 0.0});
  CHECK(std::abs(ok) > 0.1);
}

TEST_CASE("period integral: cross-check against dense Simpson quadrature") {
  // q = x^3 - x between 0 and 1, on a slightly indented straight segment the
  // integrand is smooth enough for a brute-force reference.
  ApexPolynomial q{2, {Cplx(0.0), Cplx(-1.0)}};
  Cplx fast = periodIntegral(q, {0.0, 0.0}, {1.0, 0.0});
  // Reference: integrate sqrt(q) with the substitution x = (1 - cos t)/2,
  // branch continuous from the midpoint, by plain composite Simpson.
  int N = 200000;
  Cplx acc = 0.0;
  auto f = [&](double t) {
    double x = 0.5 * (1.0 - std::cos(t));
    Cplx val = q.eval({x, 0.0});
    Cplx root = std::sqrt(val / (x * (1.0 - x) + 1e-300));
    // Branch: sqrt(q/(u(1-u))) is continuous and equals -i * positive here;
    // pick the root with nonpositive imaginary part (principal at midpoint).
    if (root.imag() > 0) root = -root;
    double st = std::sin(t);
    return (st * st / 4.0) * root;
  };
  double h = kPi / N;
  for (int i = 0; i < N; ++i) {
    double a = i * h, b = a + h;
    acc += (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) * (h / 6.0);
  }
  CHECK(std::abs(fast - acc) < 1e-7);
}
