#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stm/stcat.hpp"

namespace stm {

inline constexpr std::uint64_t kDefaultEnumerationCap = 4096;

enum class BracketDefn { CC, FC, FF };
std::string to_string(BracketDefn d);

// A finite subset of a stable hom group, stored as sorted distinct coordinate
// vectors in the Jordan coordinates of `ambient`.
struct BracketSet {
  explicit BracketSet(StableHomSpace amb) : ambient(std::move(amb)) {}

  StableHomSpace ambient;
  Variance variance = Variance::Direct;
  std::vector<Vec> elements;
  std::optional<std::vector<Vec>> indeterminacy_basis;
  std::string definition;
  std::vector<int> jseq;
  std::uint64_t enumerated = 0;
  std::string empty_reason;

  bool empty() const { return elements.empty(); }
  std::size_t size() const { return elements.size(); }
  bool contains(const Vec& c) const;
  bool contains(const StableMap& f) const;
  std::vector<StableMap> maps() const;
  int indeterminacy_rank() const;
  // Elements form one coset of the span of indeterminacy_basis.
  bool is_coset() const;
  void insert(const Vec& c);
  void normalize();
};

bool same_elements(const BracketSet& a, const BracketSet& b);
bool is_subset(const BracketSet& a, const BracketSet& b);
BracketSet negated(const BracketSet& s);

struct TodaFamilyElement {
  RModule intermediate;
  StableMap sigma_alpha;  // Σ_C X_0 → C
  StableMap beta;         // C → X_3
  CTriangle triangle;     // f2, q, ι
};

// Maps f1 : X0 → X1, f2 : X1 → X2, f3 : X2 → X3 are C-maps of `cat`.
BracketSet bracket3(const StableMap& f3, const StableMap& f2, const StableMap& f1, BracketDefn defn,
                    std::uint64_t cap = kDefaultEnumerationCap);
BracketSet bracket3(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1, BracketDefn defn,
                    std::uint64_t cap = kDefaultEnumerationCap);
// Basis of (f3)_* C(ΣX0, X2) + (Σf1)^* C(ΣX1, X3) in the coordinates of C(ΣX0, X3).
std::vector<Vec> indeterminacy(const StableMap& f3, const StableMap& f2, const StableMap& f1);
std::vector<Vec> indeterminacy(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1);

// Membership e ∈ <f3, f2, f1> without enumeration: one filler pair plus the
// coset structure.
bool bracket_contains(const StableMap& f3, const StableMap& f2, const StableMap& f1, const StableMap& e);

std::vector<TodaFamilyElement> toda_family(const StableMap& f3, const StableMap& f2, const StableMap& f1,
                                           std::uint64_t cap = kDefaultEnumerationCap);
std::vector<TodaFamilyElement> toda_family(const Cat& cat, const StableMap& f3, const StableMap& f2,
                                           const StableMap& f1, std::uint64_t cap = kDefaultEnumerationCap);

// maps = (f_n, ..., f_1). jseq = (j_1, ..., j_{n-2}) with 0 <= j_i < i; the
// innermost reduction T_{j_{n-2}} is applied first. Empty jseq means all zeros.
BracketSet higher_bracket(const std::vector<StableMap>& maps, const std::vector<int>& jseq = {},
                          std::uint64_t cap = kDefaultEnumerationCap);
BracketSet higher_bracket(const Cat& cat, const std::vector<StableMap>& maps, const std::vector<int>& jseq = {},
                          std::uint64_t cap = kDefaultEnumerationCap);
void validate_jseq(const std::vector<int>& jseq, int n);
// All (n-2)! admissible sequences in lexicographic order.
std::vector<std::vector<int>> all_jseqs(int n);
int jseq_sign_exponent(const std::vector<int>& jseq);

struct Prescribed {
  enum class Kind { SigmaAlpha, Beta };
  Kind kind;
  StableMap map;  // on the canonical cone of f2
};
BracketSet bracket3_restricted(const StableMap& f3, const StableMap& f2, const StableMap& f1, const Prescribed& fixed,
                               std::uint64_t cap = kDefaultEnumerationCap);
BracketSet bracket3_restricted(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1,
                               const Prescribed& fixed, std::uint64_t cap = kDefaultEnumerationCap);
// The distinguished triangle used for brackets on f.
CTriangle canonical_cone(const Cat& cat, const StableMap& f);
bool is_distinguished(const Cat& cat, const CTriangle& t);

// One octahedron on the factorization g_b h_a of two consecutive triangles.
struct OctahedronStage {
  RModule W;
  StableMap q;      // J_b → W
  StableMap iota;   // W → ΣJ_a
  StableMap alpha;  // ΣZ_a → W
  StableMap beta;   // W → Z_{b+1}
  StableMap gamma;  // Z_{b+1} → Σ²Z_a, equal to (Σk_a) k_b
};

// Triangles Z_i → J_i → Z_{i+1} → ΣZ_i (fields g, h, k) for i = 1..n-1 and
// g : Z_n → A. restricted_higher_bracket fills `stages`.
struct RestrictedBracketTrace {
  Cat cat;
  std::vector<CTriangle> triangles;
  StableMap g;
  std::vector<OctahedronStage> stages;
};
BracketSet restricted_higher_bracket(RestrictedBracketTrace& trace, const StableMap& x,
                                     std::uint64_t cap = kDefaultEnumerationCap);
OctahedronStage octahedron(const Cat& cat, const CTriangle& a, const CTriangle& b,
                           std::uint64_t cap = kDefaultEnumerationCap);

// (n-1)-filtered object based on (f_{n-1}, ..., f_2) with the maps a, b whose
// composite is a given element of <f_n, ..., f_1>.
struct FilteredObject {
  Ring ring;
  std::vector<RModule> F;       // F_0 = 0, ..., F_{n-1}
  std::vector<StableMap> i;     // i_j : F_j → F_{j+1}, j = 1..n-2 (index j-1)
  std::vector<StableMap> q;     // q_j : F_j → Σ^{j-1} X_{n-j}, j = 1..n-1 (index j-1)
  std::vector<StableMap> e;     // e_j : Σ^j X_{n-1-j} → ΣF_j, j = 1..n-2 (index j-1)
  StableMap sigma;              // F_{n-1} → Σ^{n-2} X_1
  StableMap sigma_prime;        // X_{n-1} → F_{n-1}
  StableMap a;                  // Σ^{n-2} X_0 → F_{n-1}
  StableMap b;                  // F_{n-1} → X_n
  std::vector<std::string> checks;
};
FilteredObject filtered_witness(const std::vector<StableMap>& maps, const StableMap& element,
                                std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace stm
