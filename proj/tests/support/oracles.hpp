#pragma once

#include <set>
#include <vector>

#include "stm/stcat.hpp"

// Reference computations that avoid Jordan coordinates and affine solving.
namespace stmtest {
using namespace stm;

// Dimension of {A : A X_M = X_N A} from the Kronecker-form linear system.
int brute_hom_dim(const RModule& M, const RModule& N);
// Block sizes from ranks of powers of X.
std::vector<int> brute_jordan_type(const RModule& M);
// Whether f lifts along a free module surjecting onto N (solved entrywise).
bool brute_factors_through_projective(const RMap& f);
bool brute_stably_equal(const RMap& f, const RMap& g);
// Exhaustive fiber-cofiber bracket: every stable map in both hom groups is
// tried, composites collected as quotient coordinates.
std::set<Vec> brute_bracket_fc(const StableMap& f3, const StableMap& f2, const StableMap& f1);
// All elements of a stable hom group.
std::vector<StableMap> all_stable_maps(const RModule& M, const RModule& N);
// Searches the φ : C_f → Z with φq = g and hφ = ι for one with a two-sided
// stable inverse ψ, found by solving φψ = 1 and ψφ = 1.
bool brute_distinguished(const Triangle& t);

}  // namespace stmtest
