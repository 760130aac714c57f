#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "oracles.hpp"
#include "stm/heller.hpp"

using namespace stm;

namespace {

RModule block(Ring r, int a) { return module_from_partition(r, {a}); }
StableMap smu(const RModule& a, const RModule& b, int j) { return StableMap(mu(a, b, j)); }

Triangle ghost_cover_triangle() {
  Ring r(2, 4);
  RModule M = block(r, 2);
  RModule P = module_from_partition(r, {1, 3});
  StableMap p(map_from_blocks(P, M, {{{0, 1}, {1}}}));
  return cone_triangle(p);
}

}  // namespace

TEST(Heller, TestObjectsAreClosedUnderShift) {
  for (int m = 2; m <= 5; ++m) {
    auto objs = heller_test_objects(Ring(3, m));
    ASSERT_EQ(static_cast<int>(objs.size()), m - 1);
    for (const RModule& A : objs) {
      RModule S = shift(A);
      EXPECT_NE(std::find(objs.begin(), objs.end(), S), objs.end());
    }
  }
}

TEST(Heller, ConeTrianglesPass) {
  stmtest::Gen g(61);
  for (int trial = 0; trial < 15; ++trial) {
    Ring r(g.pick(std::vector<int>{2, 3}), g.uniform(2, 4));
    StableMap f = g.stable_map(g.module(r, 4, true), g.module(r, 4, true));
    Triangle t = cone_triangle(f);
    HellerReport rep = heller_check(t);
    EXPECT_TRUE(rep.exact);
    EXPECT_TRUE(rep.contains_identity);
    EXPECT_TRUE(heller_check(rotate(t, 1)).distinguished());
    EXPECT_TRUE(heller_check(rotate(t, -1)).distinguished());
  }
}

TEST(Heller, CoverTriangleWithZeroThirdMap) {
  Triangle t = ghost_cover_triangle();
  ASSERT_TRUE(heller_check(t).distinguished());
  ASSERT_FALSE(t.h.is_zero());
  Triangle z{t.f, t.g, stable_zero(t.Z(), shift(t.X())), Provenance::Candidate};
  HellerReport rep = heller_check(z);
  EXPECT_FALSE(rep.distinguished());
  EXPECT_FALSE(rep.exact);
  ASSERT_TRUE(rep.failure);
  EXPECT_FALSE(stmtest::brute_distinguished(z));
}

TEST(Heller, C3TriangleWithOneNegatedMap) {
  Ring r(3, 3);
  RModule k = block(r, 1), M = block(r, 2);
  Triangle t = cone_triangle(smu(M, k, 0));
  ASSERT_TRUE(heller_check(t).distinguished());
  for (int which = 0; which < 3; ++which) {
    Triangle n = t;
    if (which == 0) n.f = -n.f;
    if (which == 1) n.g = -n.g;
    if (which == 2) n.h = -n.h;
    HellerReport rep = heller_check(n);
    EXPECT_TRUE(rep.exact);
    EXPECT_FALSE(rep.contains_identity) << which;
    EXPECT_FALSE(stmtest::brute_distinguished(n)) << which;
  }
  Triangle two{t.f, -t.g, -t.h, Provenance::Candidate};
  EXPECT_TRUE(heller_check(two).distinguished());
}

TEST(Heller, MalformedTriangleThrows) {
  Ring r(2, 4);
  RModule k = block(r, 1), M = block(r, 2);
  Triangle t = cone_triangle(smu(k, M, 1));
  Triangle bad{t.f, t.g, stable_zero(t.Z(), M), Provenance::Candidate};
  ASSERT_FALSE(M == shift(t.X()));
  EXPECT_THROW(heller_check(bad), DimensionMismatch);
  Triangle bad2{t.f, stable_zero(k, t.Z()), t.h, Provenance::Candidate};
  EXPECT_THROW(heller_check(bad2), DimensionMismatch);
}
