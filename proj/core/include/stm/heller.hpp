#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stm/toda.hpp"

namespace stm {

// One failed exactness test of T(A, −) on Σ^{-1}Z → X → Y → Z → ΣX.
struct ExactnessFailure {
  RModule A;
  std::string position;  // "X", "Y" or "Z"
  int kernel_dim = 0;
  int image_dim = 0;
};

struct HellerReport {
  bool exact = false;
  bool contains_identity = false;
  std::optional<ExactnessFailure> failure;
  int objects_tested = 0;

  bool distinguished() const { return exact && contains_identity; }
};

// The indecomposable non-projective modules R/x^i, i = 1..m−1. The family is
// closed under Σ and every object is a finite sum of its members.
std::vector<RModule> heller_test_objects(const Ring& ring);

// Distinguished iff T(A, −) is exact at X, Y, Z for every test object A and
// 1_{ΣX} ∈ <h, g, f>.
HellerReport heller_check(const Triangle& t);

}  // namespace stm
