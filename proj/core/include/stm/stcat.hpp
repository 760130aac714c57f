#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stm/modrep.hpp"

namespace stm {

class StableMap;

// Position of one stable coordinate: the coefficient of x^j in the block
// component from source block `src_block` to target block `tgt_block`.
struct StableSlot {
  int src_block;
  int tgt_block;
  int j;
};

// Stable coordinates of a map M → N are the coefficients c_j of the block
// components sum c_j x^j (Jordan coordinates) with max(0,b−a) ≤ j < min(b,m−a);
// the remaining coefficients belong to maps through projectives.
class StableHomSpace {
 public:
  StableHomSpace(RModule src, RModule tgt);

  const RModule& src() const { return src_; }
  const RModule& tgt() const { return tgt_; }
  int p() const { return src_.p(); }
  int dim() const { return static_cast<int>(slots_.size()); }
  const std::vector<StableSlot>& slots() const { return slots_; }

  Vec coords(const RMap& f) const;
  RMap representative(const Vec& coords) const;
  StableMap element(const Vec& coords) const;
  StableMap zero() const;
  std::vector<StableMap> basis() const;
  std::vector<std::string> basis_labels() const;

  std::vector<RMap> hom_basis() const;
  // Basis of the maps factoring through the projective cover of the target.
  std::vector<RMap> phom_basis() const;
  bool factors_through_projective(const RMap& f) const;

 private:
  RModule src_;
  RModule tgt_;
  std::vector<StableSlot> slots_;
};

class StableMap {
 public:
  StableMap() = default;
  explicit StableMap(RMap rep);
  StableMap(RMap rep, Vec coords);

  const RMap& rep() const { return rep_; }
  const RModule& src() const { return rep_.src(); }
  const RModule& tgt() const { return rep_.tgt(); }
  const Vec& coords() const { return coords_; }
  int p() const { return rep_.p(); }
  bool is_zero() const { return vec_is_zero(coords_); }
  StableHomSpace space() const { return StableHomSpace(src(), tgt()); }

  friend bool operator==(const StableMap& a, const StableMap& b);

 private:
  RMap rep_;
  Vec coords_;
};

StableMap operator*(const StableMap& g, const StableMap& f);
StableMap operator+(const StableMap& a, const StableMap& b);
StableMap operator-(const StableMap& a, const StableMap& b);
StableMap operator-(const StableMap& a);
StableMap scale(const StableMap& a, long long s);

StableHomSpace stable_hom(const RModule& M, const RModule& N);
bool stably_equal(const StableMap& f, const StableMap& g);
bool is_stably_zero(const StableMap& f);
bool is_stably_zero(const RModule& M);
StableMap stable_identity(const RModule& M);
StableMap stable_zero(const RModule& M, const RModule& N);

// Σ and Σ^{-1} = Ω on objects (canonical models) and on stable maps. On
// canonical objects both are strict involutions up to the identifications
// below.
RModule shift(const RModule& M);
RModule unshift(const RModule& M);
RModule shift(const RModule& M, int n);
StableMap shift(const StableMap& f);
StableMap unshift(const StableMap& f);
StableMap shift(const StableMap& f, int n);
// Identifications X ≅ Σ^{-1}ΣX ≅ ΣΣ^{-1}X ≅ J(X): to_canonical and its inverse.
StableMap to_canonical_stable(const RModule& M);
StableMap from_canonical_stable(const RModule& M);

// Linear maps on stable coordinates: post-composition with a, pre-composition with a.
FpMatrix post_composition_matrix(const StableMap& a, const RModule& from);
FpMatrix pre_composition_matrix(const StableMap& a, const RModule& to);
// x with a ∘ x = b (x : src(b) → src(a)); x with x ∘ a = b (x : tgt(a) → tgt(b)).
std::optional<AffineSpace> solve_lift(const StableMap& a, const StableMap& b);
std::optional<AffineSpace> solve_extension(const StableMap& a, const StableMap& b);
std::optional<StableMap> stable_inverse(const StableMap& f);

enum class Provenance { Constructed, Candidate };

struct Triangle {
  StableMap f;  // X → Y
  StableMap g;  // Y → Z
  StableMap h;  // Z → ΣX
  Provenance provenance = Provenance::Candidate;

  const RModule& X() const { return f.src(); }
  const RModule& Y() const { return f.tgt(); }
  const RModule& Z() const { return g.tgt(); }
};

// M → N → C_f → ΣM with C_f the cokernel of (f, ι_M) : M → N ⊕ I(M).
Triangle cone_triangle(const StableMap& f);
// K → M → N → ΣK with K the kernel of (f, p_N) : M ⊕ P(N) → N.
Triangle fiber_triangle(const StableMap& f);
// One step sends (f,g,h) to (g,h,−Σf); negative steps go backwards.
Triangle rotate(const Triangle& t, int steps = 1);
bool consecutive_composites_vanish(const Triangle& t);
bool is_stable_iso(const StableMap& f);
// Ground truth for distinguishedness: a comparison φ : C_f → Z with φq = g and
// hφ = ι, tested for invertibility.
bool distinguished_by_comparison(const Triangle& t);

enum class Variance { Direct, Opposite };

// A triangle in the category C (direct or opposite). In the opposite variance a
// C-map A → B is stored as the underlying stable map B → A.
struct CTriangle {
  StableMap f;
  StableMap g;
  StableMap h;
};

class Cat {
 public:
  explicit Cat(Variance v = Variance::Direct) : v_(v) {}
  static Cat direct() { return Cat(Variance::Direct); }
  Cat op() const { return Cat(v_ == Variance::Direct ? Variance::Opposite : Variance::Direct); }
  bool is_op() const { return v_ == Variance::Opposite; }
  Variance variance() const { return v_; }

  const RModule& src(const StableMap& f) const { return is_op() ? f.tgt() : f.src(); }
  const RModule& tgt(const StableMap& f) const { return is_op() ? f.src() : f.tgt(); }
  StableMap compose(const StableMap& g, const StableMap& f) const;
  StableHomSpace hom(const RModule& A, const RModule& B) const;
  RModule shift(const RModule& X) const;
  StableMap shift(const StableMap& f) const;
  RModule shift(const RModule& X, int n) const;
  StableMap shift(const StableMap& f, int n) const;
  CTriangle cone(const StableMap& f) const;
  // x with a ∘ x = b in C; x with x ∘ a = b in C.
  std::optional<AffineSpace> solve_lift(const StableMap& a, const StableMap& b) const;
  std::optional<AffineSpace> solve_extension(const StableMap& a, const StableMap& b) const;
  StableMap element(const RModule& A, const RModule& B, const Vec& coords) const;

 private:
  Variance v_;
};

// Transport a C-map Σ_C^n X → Y of the opposite category (a stable map
// Y → Ω^n X) to the stable map Σ^n Y → X.
StableMap transport_from_op(const StableMap& f, int n, const RModule& X);

}  // namespace stm
