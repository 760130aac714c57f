#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stm/toda.hpp"

namespace stm {

// Ghost projective class generated by G: retracts of sums of Σ^n G.
struct ProjectiveClass {
  RModule generator;  // canonical model of the non-projective part of G
  int period = 1;     // least n > 0 with Σ^n G ≅ G (1 or 2)
};

ProjectiveClass ghost_class(const RModule& G);
// f is P-null iff f_* vanishes on T(Σ^n G, −) for n over one period.
bool is_p_null(const ProjectiveClass& cls, const StableMap& f);
// f is P-epic iff f_* is onto on T(Σ^n G, −) for n over one period.
bool is_p_epic(const ProjectiveClass& cls, const StableMap& f);

struct GhostCover {
  RModule P;
  StableMap p;               // P → M
  std::vector<int> degrees;  // summand j of P is Σ^{degrees[j]} G
};

// Generators are chosen greedily, lowest degree first, among the basis maps
// Σ^n G → M not already reached by composing earlier generators with maps
// between shifts of G. The result is P-epic.
GhostCover ghost_cover(const RModule& M, const ProjectiveClass& cls);

// Triangles P_s → X_s → X_{s+1} → ΣP_s (maps p_s, i_s, δ_s). X_{s+1} is ΣK_s
// for the fiber K_s of p_s, so every X_s with s ≥ 1 and every P_s is canonical.
struct AdamsResolution {
  ProjectiveClass cls;
  std::vector<RModule> X;           // X_0 .. X_L
  std::vector<RModule> P;           // P_0 .. P_{L-1}
  std::vector<std::vector<int>> degrees;
  std::vector<StableMap> p;         // P_s → X_s
  std::vector<StableMap> i;         // X_s → X_{s+1}
  std::vector<StableMap> delta;     // X_{s+1} → ΣP_s
  std::vector<RModule> fiber;       // K_s
  std::vector<StableMap> fiber_map; // K_s → P_s

  int length() const { return static_cast<int>(P.size()); }
  Triangle triangle(int s) const;
  // d_1 = δ_s p_{s+1} : P_{s+1} → ΣP_s.
  StableMap d1(int s) const;
  // The same triangle as a triangle Y_s → I_s → ΣY_{s+1} → ΣY_s of the
  // opposite category: (p_s, Ωδ_s, Ωi_s) as underlying stable maps.
  CTriangle op_triangle(int s) const;
};

AdamsResolution adams_resolution(const RModule& M, const ProjectiveClass& cls, int length);

// Spectral sequence of T(−, Y) applied to a resolution. Gradings: E_1^{s,t} =
// T(Σ^{t−s} P_s, Y); since Σ² is the identity on canonical objects, only
// t − s mod 2 matters. d_r : E_r^{s,t} → E_r^{s+r,t+r−1}.
class AdamsSS {
 public:
  // Y must be canonical without projective summands (Σ²Y = Y).
  AdamsSS(AdamsResolution res, RModule Y);

  const AdamsResolution& resolution() const { return res_; }
  const RModule& target() const { return Y_; }
  int length() const { return res_.length(); }

  StableHomSpace E1(int s, int t) const;
  // Subspaces of E_1^{s,t}: classes surviving to E_r, and the images of d_1 .. d_{r−1}.
  std::vector<Vec> cycles(int r, int s, int t) const;
  std::vector<Vec> boundaries(int r, int s, int t) const;
  // One E_1 representative of d_r x, or nullopt when x does not survive to E_r.
  std::optional<Vec> dr_representative(const Vec& x, int s, int t, int r) const;
  // Largest r ≤ r_max with x ∈ Z_r.
  int survives_to(const Vec& x, int s, int t, int r_max) const;
  bool in_range(int r, int s) const { return s >= 0 && s < length() && s + r <= length(); }

 private:
  AdamsResolution res_;
  RModule Y_;

  FpMatrix i_star(int s, int n) const;          // D^{s+1,n} → D^{s,n}
  FpMatrix i_chain(int from, int to, int n) const;  // D^{from,n} → D^{to,n}, from ≥ to
  FpMatrix p_star(int s, int n) const;          // D^{s,n} → E^{s,n}
  FpMatrix delta_star(int s, int n) const;      // E^{s,n} → D^{s+1,n−1}
  StableHomSpace D1(int s, int n) const;
  StableHomSpace E(int s, int n) const;
};

int mod2(int n);

struct SSGroup {
  SSGroup(int s_, int t_, StableHomSpace e1) : s(s_), t(t_), E1(std::move(e1)) {}
  int s = 0;
  int t = 0;
  StableHomSpace E1;
  std::vector<Vec> cycles;
  std::vector<Vec> boundaries;
  std::vector<Vec> reps;  // E_1 representatives of a basis of E_r
  int dim() const { return static_cast<int>(reps.size()); }
};

struct SSPage {
  int r = 1;
  std::vector<SSGroup> groups;  // s = 0 .. L − r, t − s ∈ {0, 1}
  // d_r in the bases `reps`, keyed by the source (s, t − s).
  std::map<std::pair<int, int>, FpMatrix> d;

  const SSGroup& at(int s, int t) const;
  std::optional<FpMatrix> differential(int s, int t) const;
};

std::vector<SSPage> pages(const AdamsResolution& res, const RModule& Y, int r_max);
SSPage page(const AdamsSS& ss, int r);

// All E_1 representatives of d_r[x] for x ∈ E_1^{s,t}. Throws when x does not
// survive to E_r, naming the first nonzero differential.
BracketSet dr_set(const AdamsSS& ss, const StableMap& x, int s, int t, int r,
                  std::uint64_t cap = kDefaultEnumerationCap);

struct DrFormsReport {
  DrFormsReport(int r_, int s_, int t_, BracketSet a)
      : r(r_), s(s_), t(t_), dr(a), full(a.ambient), restricted(a.ambient), filtered(a.ambient) {}
  int r = 2;
  int s = 0;
  int t = 0;
  BracketSet dr;          // (a) all representatives of d_r[x]
  BracketSet full;        // (b) <Σ^{r−1}d_1, ..., Σd_1, Σp_{s+1}, δ_s x> in the opposite category
  BracketSet restricted;  // (c) <Σ^{r−1}d_1 ! ... ! d_1, x>
  BracketSet filtered;    // (e) composites b a through the r-filtered object W
  std::vector<RModule> W;
  // r = 2 only: the composed variant (Σ²p)<Σδ, Σp, δx> and, in the
  // orientation of the projective class, <x, d_1, δ>, <x, d_1, δ>(Σp) and <x, d_1, d_1>,
  // each multiplied by (−1)^{t−s} since x lives on Σ^{t−s}P_s.
  std::optional<BracketSet> composed;
  std::optional<BracketSet> inner;
  std::optional<BracketSet> middle;
  std::optional<BracketSet> outer;

  bool full_equal = false;
  bool restricted_equal = false;
  bool filtered_equal = false;
  bool composed_equal = false;
  bool chain_holds = false;     // dr ⊆ middle ⊆ outer
  bool first_proper = false;    // dr ⊊ middle
  bool second_proper = false;   // middle ⊊ outer
  bool all_equal() const;
};

DrFormsReport dr_bracket_forms(const AdamsSS& ss, const StableMap& x, int s, int t, int r,
                               std::uint64_t cap = kDefaultEnumerationCap);

struct SparseReport {
  int N = 2;
  int window = 0;
  std::vector<std::pair<int, int>> dims;  // (degree d, dim T(Ω^d G, G))
  std::vector<int> nonzero_degrees;
  bool sparse = true;
};

// Graded stable endomorphisms of G in degrees −window .. window.
SparseReport sparse_check(const RModule& G, int N, int window);

}  // namespace stm
