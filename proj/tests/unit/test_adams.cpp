#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "stm/adams.hpp"

using namespace stm;

namespace {

Ring R24() { return Ring(2, 4); }
RModule block(Ring r, int a) { return module_from_partition(r, {a}); }

struct GhostExample {
  RModule k = block(R24(), 1);
  RModule M = block(R24(), 2);
  ProjectiveClass cls = ghost_class(k);
  AdamsResolution res = adams_resolution(M, cls, 6);
  AdamsSS ss{res, M};
};

const GhostExample& a1() {
  static const GhostExample d;
  return d;
}

StableMap blocks(const RModule& src, const RModule& tgt, const std::vector<std::vector<Vec>>& polys) {
  return StableMap(map_from_blocks(src, tgt, polys));
}

std::vector<StableMap> all_classes(const StableHomSpace& H) {
  std::vector<StableMap> out;
  for (const Vec& c : enumerate_points(AffineSpace{H.p(), Vec(H.dim(), 0), [&] {
                                         std::vector<Vec> b;
                                         for (const StableMap& e : H.basis()) b.push_back(e.coords());
                                         return b;
                                       }()},
                                       1u << 12))
    out.push_back(H.element(c));
  return out;
}

int mod2i(int n) { return ((n % 2) + 2) % 2; }
StableMap sh(const StableMap& f, int n) { return mod2i(n) ? shift(f) : f; }

}  // namespace

TEST(Adams, GhostClassOfTrivialModule) {
  const GhostExample& d = a1();
  EXPECT_EQ(d.cls.generator, d.k);
  EXPECT_EQ(d.cls.period, 2);
  EXPECT_EQ(ghost_class(block(Ring(2, 2), 1)).period, 1);
  EXPECT_EQ(ghost_class(block(R24(), 4)).generator.dim(), 0);
}

TEST(Adams, GhostCoverOfM) {
  const GhostExample& d = a1();
  GhostCover c = ghost_cover(d.M, d.cls);
  EXPECT_EQ(c.P, module_from_partition(R24(), {1, 3}));
  EXPECT_EQ(c.degrees, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.p, blocks(c.P, d.M, {{{0, 1}, {1}}}));
  EXPECT_TRUE(is_p_epic(d.cls, c.p));
  Triangle fib = fiber_triangle(c.p);
  EXPECT_EQ(jordan_type(nonprojective_part(fib.X())), (std::vector<int>{2}));
}

TEST(Adams, ResolutionOfM) {
  const GhostExample& d = a1();
  ASSERT_EQ(d.res.length(), 6);
  const RModule P = module_from_partition(R24(), {1, 3});
  for (int s = 0; s < 6; ++s) {
    EXPECT_EQ(d.res.X[static_cast<std::size_t>(s + 1)], d.M);
    EXPECT_EQ(d.res.P[static_cast<std::size_t>(s)], P);
    EXPECT_TRUE(distinguished_by_comparison(d.res.triangle(s))) << s;
    EXPECT_TRUE(is_distinguished(Cat::direct().op(), d.res.op_triangle(s))) << s;
    EXPECT_TRUE(is_p_null(d.cls, d.res.i[static_cast<std::size_t>(s)]));
    EXPECT_TRUE(is_p_epic(d.cls, d.res.p[static_cast<std::size_t>(s)]));
    EXPECT_EQ(d.res.i[static_cast<std::size_t>(s)], blocks(d.M, d.M, {{{0, 1}}}));
  }
  // d_1 : k ⊕ Ωk → Ωk ⊕ k with entries μ_{x²} (k → Ωk) and μ_1 (Ωk → k).
  const RModule SP = shift(P);
  EXPECT_EQ(SP, module_from_partition(R24(), {3, 1}));
  for (int s = 0; s + 1 < 6; ++s) EXPECT_EQ(d.res.d1(s), blocks(P, SP, {{{0, 0, 1}, {0}}, {{0}, {1}}}));
}

TEST(Adams, TrivialResolutions) {
  Ring r = R24();
  ProjectiveClass cls = ghost_class(block(r, 1));
  AdamsResolution proj = adams_resolution(block(r, 4), cls, 2);
  EXPECT_EQ(proj.P[0].dim(), 0);
  EXPECT_EQ(proj.X[1].dim(), 0);
  EXPECT_EQ(proj.X[2].dim(), 0);
  AdamsResolution self = adams_resolution(block(r, 1), cls, 2);
  EXPECT_EQ(self.P[0], block(r, 1));
  EXPECT_TRUE(self.i[0].is_zero());
  EXPECT_EQ(self.X[1].dim(), 0);
  EXPECT_THROW(adams_resolution(block(r, 1), cls, 0), Error);
}

TEST(Adams, E1DimensionsOfM) {
  const GhostExample& d = a1();
  for (int s = 0; s < 6; ++s)
    for (int t = s; t < s + 4; ++t) EXPECT_EQ(d.ss.E1(s, t).dim(), 2);
  EXPECT_THROW(AdamsSS(d.res, module_from_partition(R24(), {2, 4})), Error);
  EXPECT_THROW(pages(d.res, d.M, 6), Error);
}

TEST(Adams, D2OfKappa) {
  const GhostExample& d = a1();
  const RModule P = d.res.P[0];
  StableMap kappa = blocks(P, d.M, {{{0, 1}, {0}}});
  BracketSet d2 = dr_set(d.ss, kappa, 0, 0, 2);
  ASSERT_EQ(d2.size(), 1u);
  EXPECT_EQ(d2.maps()[0], blocks(shift(P), d.M, {{{1}, {0, 1}}}));
  EXPECT_EQ(d2.indeterminacy_rank(), 0);
}

TEST(Adams, D2HasNoIndeterminacyOnAnyKappa) {
  const GhostExample& d = a1();
  for (const StableMap& kappa : all_classes(d.ss.E1(0, 0))) {
    BracketSet d2 = dr_set(d.ss, kappa, 0, 0, 2);
    EXPECT_EQ(d2.size(), 1u);
    EXPECT_EQ(d2.indeterminacy_rank(), 0);
  }
}

TEST(Adams, D1IsCompositeWithD1) {
  const GhostExample& d = a1();
  for (int s = 0; s < 4; ++s)
    for (int t = s; t < s + 2; ++t)
      for (const StableMap& x : all_classes(d.ss.E1(s, t))) {
        BracketSet d1 = dr_set(d.ss, x, s, t, 1);
        ASSERT_EQ(d1.size(), 1u);
        EXPECT_EQ(d1.maps()[0], x * sh(d.res.d1(s), t - s - 1));
      }
}

TEST(Adams, ZeroClassHasZeroDifferentials) {
  const GhostExample& d = a1();
  for (int r = 1; r <= 3; ++r) {
    BracketSet z = dr_set(d.ss, d.ss.E1(0, 1).zero(), 0, 1, r);
    EXPECT_TRUE(z.contains(Vec(static_cast<std::size_t>(z.ambient.dim()), 0)));
    EXPECT_TRUE(z.is_coset());
  }
}

TEST(Adams, NonSurvivingClassIsReported) {
  const GhostExample& d = a1();
  const RModule P = d.res.P[0];
  StableMap kappa = blocks(P, d.M, {{{0, 1}, {0}}});
  try {
    dr_set(d.ss, kappa, 0, 0, 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("d_2"), std::string::npos);
  }
  EXPECT_THROW(dr_set(d.ss, d.ss.E1(5, 5).zero(), 5, 5, 1), Error);
  EXPECT_THROW(dr_set(d.ss, d.ss.E1(0, 1).zero(), 0, 0, 1), DimensionMismatch);
}

TEST(Adams, FormsOnKappa) {
  const GhostExample& d = a1();
  const RModule P = d.res.P[0];
  StableMap kappa = blocks(P, d.M, {{{0, 1}, {0}}});
  DrFormsReport rep = dr_bracket_forms(d.ss, kappa, 0, 0, 2);
  EXPECT_TRUE(rep.all_equal());
  ASSERT_TRUE(rep.inner && rep.middle && rep.outer && rep.composed);
  // Frozen from brute_bracket_fc: {1_M, 1_M + μ_x}.
  std::set<Vec> inner(rep.inner->elements.begin(), rep.inner->elements.end());
  EXPECT_EQ(inner, stmtest::brute_bracket_fc(kappa, shift(d.res.d1(0)), d.res.delta[1]));
  EXPECT_EQ(inner, (std::set<Vec>{{1, 0}, {1, 1}}));
  EXPECT_TRUE(rep.inner->contains(stable_identity(d.M)));
  EXPECT_TRUE(same_elements(*rep.middle, rep.dr));
  EXPECT_EQ(rep.outer->size(), 2u);
  EXPECT_EQ(rep.outer->indeterminacy_rank(), 1);
  EXPECT_TRUE(rep.outer->contains(blocks(shift(P), d.M, {{{1}, {0}}})));
  EXPECT_TRUE(rep.outer->contains(blocks(shift(P), d.M, {{{1}, {0, 1}}})));
  EXPECT_TRUE(rep.chain_holds);
  EXPECT_FALSE(rep.first_proper);
  EXPECT_TRUE(rep.second_proper);
  EXPECT_EQ(rep.W.size(), 1u);
}

TEST(Adams, FormsAgreeForD2OnEveryClass) {
  const GhostExample& d = a1();
  int checked = 0;
  for (int s = 0; s + 2 < 6; ++s)
    for (int t = s; t < s + 2; ++t)
      for (const StableMap& x : all_classes(d.ss.E1(s, t))) {
        if (d.ss.survives_to(x.coords(), s, t, 2) < 2) continue;
        DrFormsReport rep = dr_bracket_forms(d.ss, x, s, t, 2);
        EXPECT_TRUE(rep.all_equal()) << "s=" << s << " t=" << t;
        EXPECT_TRUE(rep.chain_holds);
        ++checked;
      }
  EXPECT_GE(checked, 8);
}

TEST(Adams, FormsAgreeForD3WhereDefined) {
  const GhostExample& d = a1();
  int checked = 0;
  for (int s = 0; s + 3 < 6; ++s)
    for (int t = s; t < s + 2; ++t)
      for (const StableMap& x : all_classes(d.ss.E1(s, t))) {
        if (d.ss.survives_to(x.coords(), s, t, 3) < 3) continue;
        DrFormsReport rep = dr_bracket_forms(d.ss, x, s, t, 3);
        EXPECT_TRUE(rep.all_equal()) << "s=" << s << " t=" << t;
        EXPECT_EQ(rep.W.size(), 2u);
        ++checked;
      }
  EXPECT_GE(checked, 3);
}

TEST(Adams, DrTwiceIsZero) {
  const GhostExample& d = a1();
  for (int r = 1; r <= 2; ++r)
    for (int s = 0; s + 2 * r < 6; ++s)
      for (int t = s; t < s + 2; ++t)
        for (const StableMap& x : all_classes(d.ss.E1(s, t))) {
          if (d.ss.survives_to(x.coords(), s, t, r) < r) continue;
          for (const StableMap& e : dr_set(d.ss, x, s, t, r).maps()) {
            BracketSet again = dr_set(d.ss, e, s + r, t + r - 1, r);
            EXPECT_TRUE(again.contains(Vec(static_cast<std::size_t>(again.ambient.dim()), 0)));
          }
        }
}

TEST(Adams, E2IsHomologyOfD1) {
  const GhostExample& d = a1();
  SSPage e1 = page(d.ss, 1), e2 = page(d.ss, 2);
  for (const SSGroup& g : e2.groups) {
    const int n = g.t - g.s;
    auto out = e1.differential(g.s, g.t);
    ASSERT_TRUE(out);
    int in_rank = 0;
    if (g.s > 0) {
      auto in = e1.differential(g.s - 1, g.t);
      ASSERT_TRUE(in);
      in_rank = rank(*in);
    }
    EXPECT_EQ(g.dim(), e1.at(g.s, g.s + n).dim() - rank(*out) - in_rank) << g.s << "," << n;
  }
}

TEST(Adams, PagesHaveSquareZeroDifferentials) {
  const GhostExample& d = a1();
  auto ps = pages(d.res, d.M, 3);
  ASSERT_EQ(ps.size(), 3u);
  for (const SSPage& pg : ps)
    for (const auto& [key, D] : pg.d) {
      auto next = pg.differential(key.first + pg.r, key.first + key.second + pg.r - 1);
      if (!next || D.empty() || next->empty()) continue;
      EXPECT_TRUE((*next * D).is_zero());
    }
}

TEST(Adams, SparseCheck) {
  SparseReport k = sparse_check(block(R24(), 1), 2, 4);
  EXPECT_FALSE(k.sparse);
  EXPECT_EQ(k.nonzero_degrees.size(), 9u);
  for (int N = 2; N <= 5; ++N) EXPECT_FALSE(sparse_check(block(R24(), 1), N, 4).sparse);
  SparseReport proj = sparse_check(block(R24(), 4), 2, 4);
  EXPECT_TRUE(proj.sparse);
  EXPECT_TRUE(proj.nonzero_degrees.empty());
  SparseReport c2 = sparse_check(block(Ring(2, 2), 1), 2, 3);
  EXPECT_EQ(c2.nonzero_degrees.size(), 7u);
  EXPECT_THROW(sparse_check(block(R24(), 1), 2, 1), Error);
}
