#include "stm/heller.hpp"

namespace stm {

namespace {

void require_triangle(const Triangle& t) {
  if (!(t.g.src() == t.Y()) || !(t.h.src() == t.Z()))
    throw DimensionMismatch("triangle maps are not composable");
  if (!(t.h.tgt() == shift(t.X()))) throw DimensionMismatch("third map must land in ΣX");
}

// Exactness of U → V → W at V for the matrices a : U → V and b : V → W.
std::optional<std::pair<int, int>> inexact(const FpMatrix& a, const FpMatrix& b) {
  const int ker = b.cols() - (b.empty() ? 0 : rank(b));
  const int im = a.empty() ? 0 : rank(a);
  const bool zero = a.empty() || b.empty() || (b * a).is_zero();
  if (zero && ker == im) return std::nullopt;
  return std::make_pair(ker, im);
}

}  // namespace

std::vector<RModule> heller_test_objects(const Ring& ring) {
  std::vector<RModule> out;
  for (int i = 1; i < ring.m; ++i) out.push_back(module_from_partition(ring, {i}));
  return out;
}

HellerReport heller_check(const Triangle& t) {
  require_triangle(t);
  HellerReport rep;
  const StableMap desus_h = from_canonical_stable(t.X()) * unshift(t.h);
  const StableMap* maps[] = {&desus_h, &t.f, &t.g, &t.h};
  static const char* positions[] = {"X", "Y", "Z"};
  rep.exact = true;
  for (const RModule& A : heller_test_objects(t.X().ring())) {
    ++rep.objects_tested;
    std::vector<FpMatrix> post;
    for (const StableMap* f : maps) post.push_back(post_composition_matrix(*f, A));
    for (int k = 0; k < 3; ++k)
      if (auto bad = inexact(post[static_cast<std::size_t>(k)], post[static_cast<std::size_t>(k + 1)])) {
        rep.exact = false;
        rep.failure = ExactnessFailure{A, positions[k], bad->first, bad->second};
        break;
      }
    if (!rep.exact) break;
  }
  rep.contains_identity = bracket_contains(t.h, t.g, t.f, stable_identity(shift(t.X())));
  return rep;
}

}  // namespace stm
