#include <gtest/gtest.h>

#include <map>

#include "generators.hpp"
#include "oracles.hpp"
#include "stm/heller.hpp"

using namespace stm;
using stmtest::ring_for;

TEST(HellerProperty, AgreesWithConeIsomorphismSearch) {
  stmtest::Gen g(301);
  std::map<std::string, int> seen, positive;
  int total = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Ring r = ring_for(trial);
    for (const stmtest::HellerCandidate& c : stmtest::heller_candidates(g, r)) {
      const bool truth = stmtest::brute_distinguished(c.t);
      EXPECT_EQ(heller_check(c.t).distinguished(), truth) << c.kind << " trial " << trial;
      EXPECT_EQ(distinguished_by_comparison(c.t), truth) << c.kind << " trial " << trial;
      ++seen[c.kind];
      if (truth) ++positive[c.kind];
      ++total;
    }
  }
  EXPECT_GE(total, 100);
  EXPECT_EQ(positive["cone"], seen["cone"]);
  EXPECT_EQ(positive["rotate+1"], seen["rotate+1"]);
  EXPECT_EQ(positive["fiber"], seen["fiber"]);
  EXPECT_LT(positive["negated"], seen["negated"]);
  EXPECT_LT(positive["zeroed"], seen["zeroed"]);
}

TEST(HellerProperty, RotationPreservesVerdict) {
  stmtest::Gen g(302);
  for (int trial = 0; trial < 20; ++trial) {
    Ring r = ring_for(trial);
    for (const stmtest::HellerCandidate& c : stmtest::heller_candidates(g, r)) {
      const bool v = heller_check(c.t).distinguished();
      EXPECT_EQ(heller_check(rotate(c.t, 1)).distinguished(), v) << c.kind;
      EXPECT_EQ(heller_check(rotate(c.t, -1)).distinguished(), v) << c.kind;
    }
  }
}
