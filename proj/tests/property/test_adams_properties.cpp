#include <gtest/gtest.h>

#include "generators.hpp"
#include "stm/adams.hpp"

using namespace stm;
using stmtest::ring_for;

namespace {

constexpr std::uint64_t kCap = 1u << 13;

RModule nonprojective(stmtest::Gen& g, const Ring& r, int max_dim, int max_blocks) {
  return module_from_partition(r, g.partition(r, max_dim, false, max_blocks));
}

}  // namespace

TEST(AdamsProperty, ResolutionTrianglesAreAdams) {
  stmtest::Gen g(201);
  const Cat op = Cat::direct().op();
  for (int trial = 0; trial < 30; ++trial) {
    Ring r = ring_for(trial);
    ProjectiveClass cls = ghost_class(nonprojective(g, r, 3, 1));
    AdamsResolution res = adams_resolution(g.module(r, 4, true), cls, 3);
    for (int s = 0; s < res.length(); ++s) {
      EXPECT_TRUE(distinguished_by_comparison(res.triangle(s))) << trial << " s=" << s;
      EXPECT_TRUE(is_distinguished(op, res.op_triangle(s))) << trial << " s=" << s;
      EXPECT_TRUE(is_p_null(cls, res.i[static_cast<std::size_t>(s)]));
      EXPECT_TRUE(is_p_epic(cls, res.p[static_cast<std::size_t>(s)]));
    }
  }
}

TEST(AdamsProperty, BracketFormsMatchDifferentials) {
  stmtest::Gen g(202);
  int r2 = 0, r3 = 0, nonzero = 0, skipped = 0;
  for (int trial = 0; trial < 36; ++trial) {
    Ring r = ring_for(trial);
    ProjectiveClass cls = ghost_class(nonprojective(g, r, 2, 1));
    RModule M = nonprojective(g, r, 4, 2);
    RModule Y = nonprojective(g, r, 3, 2);
    AdamsSS ss(adams_resolution(M, cls, 4), Y);
    for (int s = 0; s < 2; ++s)
      for (int t = s; t < s + 2; ++t) {
        StableHomSpace H = ss.E1(s, t);
        if (H.dim() == 0) continue;
        for (int k = 0; k < 4; ++k) {
          StableMap x = H.element(g.vec(r.p, H.dim()));
          const int reach = ss.survives_to(x.coords(), s, t, 4 - s - 1);
          if (reach < 2) continue;
          try {
            DrFormsReport f2 = dr_bracket_forms(ss, x, s, t, 2, kCap);
            EXPECT_TRUE(f2.all_equal()) << trial << " s=" << s << " t=" << t;
            EXPECT_TRUE(f2.chain_holds);
            ++r2;
            if (!f2.dr.contains(Vec(static_cast<std::size_t>(f2.dr.ambient.dim()), 0))) ++nonzero;
            if (reach >= 3) {
              DrFormsReport f3 = dr_bracket_forms(ss, x, s, t, 3, kCap);
              EXPECT_TRUE(f3.all_equal()) << trial << " s=" << s << " t=" << t << " r=3";
              ++r3;
            }
          } catch (const EnumerationOverflow&) {
            ++skipped;
          }
        }
      }
  }
  EXPECT_LE(skipped, r2 / 4);
  EXPECT_GE(r2, 40);
  EXPECT_GE(r3, 10);
  EXPECT_GE(nonzero, 5);
}

TEST(AdamsProperty, DrSetsAreCosetsOfBoundaries) {
  stmtest::Gen g(203);
  for (int trial = 0; trial < 20; ++trial) {
    Ring r = ring_for(trial);
    ProjectiveClass cls = ghost_class(nonprojective(g, r, 2, 1));
    AdamsSS ss(adams_resolution(nonprojective(g, r, 4, 2), cls, 4), nonprojective(g, r, 3, 2));
    for (int rr = 1; rr <= 2; ++rr) {
      StableHomSpace H = ss.E1(0, 1);
      if (H.dim() == 0) continue;
      StableMap x = H.element(g.vec(r.p, H.dim()));
      if (ss.survives_to(x.coords(), 0, 1, rr) < rr) continue;
      BracketSet d = dr_set(ss, x, 0, 1, rr);
      EXPECT_TRUE(d.is_coset());
      EXPECT_EQ(d.indeterminacy_rank(), static_cast<int>(ss.boundaries(rr, rr, rr).size()));
      for (const StableMap& e : d.maps()) EXPECT_EQ(ss.survives_to(e.coords(), rr, rr, 4 - rr - 1), 4 - rr - 1);
    }
  }
}
