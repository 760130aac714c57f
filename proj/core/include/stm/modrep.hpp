#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stm/linalg.hpp"

namespace stm {

// R = F_p[x]/x^m.
struct Ring {
  int p = 2;
  int m = 1;

  Ring() = default;
  Ring(int p_, int m_);
  friend bool operator==(const Ring&, const Ring&) = default;
};

// Chain basis putting X into lower-shift Jordan form: S^{-1} X S is block
// diagonal with one lower shift per entry of `sizes`.
struct JordanData {
  std::vector<int> sizes;
  std::vector<int> offsets;
  FpMatrix S;
  FpMatrix Sinv;
  bool canonical = false;
};

class RModule {
 public:
  RModule();
  RModule(Ring ring, FpMatrix X);

  const Ring& ring() const { return impl_->ring; }
  int p() const { return impl_->ring.p; }
  int m() const { return impl_->ring.m; }
  int dim() const { return impl_->X.rows(); }
  const FpMatrix& X() const { return impl_->X; }
  const JordanData& jordan() const { return impl_->jordan; }
  bool is_canonical() const { return impl_->jordan.canonical; }
  int num_blocks() const { return static_cast<int>(impl_->jordan.sizes.size()); }
  const std::vector<int>& block_sizes() const { return impl_->jordan.sizes; }

  bool same_as(const RModule& other) const;
  friend bool operator==(const RModule& a, const RModule& b) { return a.same_as(b); }

 private:
  struct Impl {
    Ring ring;
    FpMatrix X;
    JordanData jordan;
  };
  std::shared_ptr<const Impl> impl_;
};

class RMap {
 public:
  RMap() = default;
  RMap(RModule src, RModule tgt, FpMatrix A);

  const RModule& src() const { return src_; }
  const RModule& tgt() const { return tgt_; }
  const FpMatrix& A() const { return A_; }
  int p() const { return src_.p(); }

 private:
  RModule src_;
  RModule tgt_;
  FpMatrix A_;
};

void require_same_ring(const RModule& a, const RModule& b);

RModule module_from_partition(Ring ring, const std::vector<int>& parts);
RModule zero_module(Ring ring);
RModule direct_sum(const RModule& a, const RModule& b);
RModule direct_sum(const std::vector<RModule>& parts, Ring ring);
std::vector<int> jordan_type(const RModule& M);
bool is_projective(const RModule& M);

RMap identity_map(const RModule& M);
RMap zero_map(const RModule& M, const RModule& N);
RMap compose(const RMap& g, const RMap& f);
RMap operator+(const RMap& a, const RMap& b);
RMap operator-(const RMap& a, const RMap& b);
RMap operator-(const RMap& a);
RMap scale(const RMap& a, long long s);
// Block matrix [a b] : A ⊕ B → N and [a; b] : M → A ⊕ B.
RMap hcat(const RMap& a, const RMap& b);
RMap vcat(const RMap& a, const RMap& b);
RMap direct_sum_map(const RMap& a, const RMap& b);
RMap inclusion_first(const RModule& a, const RModule& b);
RMap inclusion_second(const RModule& a, const RModule& b);
RMap projection_first(const RModule& a, const RModule& b);
RMap projection_second(const RModule& a, const RModule& b);

// Multiplication by x^j between the cyclic canonical modules R/x^a → R/x^b.
RMap mu(const RModule& src, const RModule& tgt, int j);
// Map given blockwise in Jordan coordinates: polys[t][s] lists the coefficients
// c_0, c_1, ... of the polynomial sending the generator of source block s to
// sum_j c_j x^j times the generator of target block t.
RMap map_from_blocks(const RModule& src, const RModule& tgt, const std::vector<std::vector<Vec>>& polys);
// Inverse of map_from_blocks: the full polynomial coefficients of every block.
std::vector<std::vector<Vec>> block_polys(const RMap& f);

std::vector<RMap> hom_basis(const RModule& M, const RModule& N);

struct Cover {
  RModule P;
  RMap p;  // P → M
};
struct Envelope {
  RModule I;
  RMap iota;  // M → I
};
Cover projective_cover(const RModule& M);
Envelope injective_envelope(const RModule& M);

struct Syzygy {
  RModule module;  // ΩM, canonical
  RMap incl;       // ΩM → P(M)
  Cover cover;
};
struct Cosyzygy {
  RModule module;  // ΣM, canonical
  RMap proj;       // I(M) → ΣM
  Envelope envelope;
};
Syzygy omega(const RModule& M);
Cosyzygy sigma(const RModule& M);

// Canonical model of the non-projective part of M (blocks of size < m in
// Jordan order) and the comparison maps, inverse to each other stably.
RModule nonprojective_part(const RModule& M);
RMap to_canonical(const RModule& M);
RMap from_canonical(const RModule& M);

struct SubmoduleData {
  RModule module;
  RMap incl;
};
struct QuotientData {
  RModule module;
  RMap proj;
  FpMatrix section;  // linear right inverse of proj
};
SubmoduleData kernel(const RMap& f);
QuotientData cokernel(const RMap& f);

// Solve for an R-linear φ : src → tgt with φ ∘ a = b (a : D → src, b : D → tgt).
std::optional<RMap> extend_along(const RMap& a, const RMap& b);
// Solve for an R-linear φ : src → tgt with a ∘ φ = b (a : tgt → D, b : src → D).
std::optional<RMap> lift_along(const RMap& a, const RMap& b);
std::optional<RMap> find_isomorphism(const RModule& M, const RModule& N);

std::string partition_string(const std::vector<int>& parts);

}  // namespace stm
