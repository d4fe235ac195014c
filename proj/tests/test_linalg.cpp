#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cstab/linalg.hpp"

using namespace cstab;

TEST_CASE("rational parsing round trip") {
  CHECK(parseRat("3/4") == Rat(3, 4));
  CHECK(parseRat("-7") == Rat(-7));
  CHECK(ratToString(Rat(22, 4)) == "11/2");
  CHECK_THROWS(parseRat("1/0"));
}

TEST_CASE("QC arithmetic") {
  QC a(Rat(1), Rat(2)), b(Rat(3), Rat(-1));
  CHECK(a * b == QC(Rat(5), Rat(5)));
  CHECK((a / a) == QC(Rat(1)));
  CHECK(qcPow(a, 0) == QC(Rat(1)));
  CHECK(qcPow(a, 2) == a * a);
  CHECK(qcPow(a, -1) * a == QC(Rat(1)));
}

TEST_CASE("determinant and inverse") {
  QMat m(2, 2);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 5;
  m(1, 1) = 3;
  CHECK(qmatDet(m) == Rat(1));
  auto inv = qmatInverse(m);
  REQUIRE(inv.has_value());
  QMat id = qmatMul(m, *inv);
  CHECK(id == QMat::identity(2));

  QMat sing(2, 2);
  sing(0, 0) = 1;
  sing(0, 1) = 2;
  sing(1, 0) = 2;
  sing(1, 1) = 4;
  CHECK(qmatDet(sing) == Rat(0));
  CHECK(!qmatInverse(sing).has_value());
}

TEST_CASE("solve and kernel") {
  QMat m(2, 3);
  m(0, 0) = 1;
  m(0, 1) = 1;
  m(0, 2) = 0;
  m(1, 0) = 0;
  m(1, 1) = 1;
  m(1, 2) = 1;
  auto x = solveExact(m, {Rat(2), Rat(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] + (*x)[1] == 2);
  CHECK((*x)[1] + (*x)[2] == 1);
  auto ker = kernelBasis(m);
  CHECK(ker.size() == 1);
  // Inconsistent system.
  QMat bad(2, 1);
  bad(0, 0) = 1;
  bad(1, 0) = 1;
  CHECK(!solveExact(bad, {Rat(0), Rat(1)}).has_value());
}

TEST_CASE("primitive vectors") {
  CHECK(primitive({4, -6, 2}) == IVec{2, -3, 1});
  CHECK(primitiveOfRational({Rat(1, 2), Rat(-3, 4)}) == IVec{2, -3});
  CHECK(primitiveOfRational({Rat(0), Rat(0)}) == IVec{0, 0});
}

TEST_CASE("extreme rays of simple cones") {
  // Positive quadrant: x >= 0, y >= 0.
  std::vector<RatVec> hs{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  auto rays = extremeRays(hs, 2);
  REQUIRE(rays.size() == 2);
  CHECK(((rays[0] == IVec{0, 1} && rays[1] == IVec{1, 0}) ||
         (rays[0] == IVec{1, 0} && rays[1] == IVec{0, 1})));

  // Intersection of two adjacent quadrant-like cones: single ray.
  std::vector<RatVec> hs2{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}, {Rat(1), Rat(1)}};
  auto rays2 = extremeRays(hs2, 2);
  REQUIRE(rays2.size() == 1);
  CHECK(rays2[0] == IVec{1, 0});

  // Full-dimensional simplicial cone in R^3.
  std::vector<RatVec> hs3{{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(0), Rat(1)}};
  CHECK(extremeRays(hs3, 3).size() == 3);
}
