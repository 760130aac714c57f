#include "stm/toda.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace stm {

std::string to_string(BracketDefn d) {
  switch (d) {
    case BracketDefn::CC: return "cc";
    case BracketDefn::FC: return "fc";
    case BracketDefn::FF: return "ff";
  }
  return "?";
}

bool BracketSet::contains(const Vec& c) const { return std::binary_search(elements.begin(), elements.end(), c); }

bool BracketSet::contains(const StableMap& f) const {
  if (!(f.src() == ambient.src()) || !(f.tgt() == ambient.tgt())) throw DimensionMismatch("map outside the ambient group");
  return contains(f.coords());
}

std::vector<StableMap> BracketSet::maps() const {
  std::vector<StableMap> out;
  for (const Vec& c : elements) out.push_back(ambient.element(c));
  return out;
}

int BracketSet::indeterminacy_rank() const {
  if (!indeterminacy_basis || indeterminacy_basis->empty()) return 0;
  return rank(FpMatrix::from_columns(ambient.p(), ambient.dim(), *indeterminacy_basis));
}

bool BracketSet::is_coset() const {
  if (elements.empty()) return true;
  std::vector<Vec> basis = indeterminacy_basis ? *indeterminacy_basis : std::vector<Vec>{};
  QuotientMap Q(ambient.p(), ambient.dim(), basis);
  for (const Vec& e : elements)
    if (!Q.contains(vec_sub(e, elements.front(), ambient.p()))) return false;
  std::uint64_t expected = 1;
  for (int i = 0; i < Q.subspace_dim(); ++i) expected *= static_cast<std::uint64_t>(ambient.p());
  return elements.size() == expected;
}

void BracketSet::insert(const Vec& c) { elements.push_back(c); }

void BracketSet::normalize() {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
}

bool same_elements(const BracketSet& a, const BracketSet& b) {
  return a.ambient.src() == b.ambient.src() && a.ambient.tgt() == b.ambient.tgt() && a.elements == b.elements;
}

bool is_subset(const BracketSet& a, const BracketSet& b) {
  if (!(a.ambient.src() == b.ambient.src()) || !(a.ambient.tgt() == b.ambient.tgt()))
    throw DimensionMismatch("is_subset: different ambient groups");
  return std::includes(b.elements.begin(), b.elements.end(), a.elements.begin(), a.elements.end());
}

BracketSet negated(const BracketSet& s) {
  BracketSet out = s;
  for (Vec& e : out.elements) e = vec_scale(e, -1, s.ambient.p());
  out.normalize();
  return out;
}

namespace {

// x : D → src(a) with a ∘ x, as a matrix on C-coordinates.
FpMatrix lift_matrix(const Cat& cat, const StableMap& a, const RModule& D) {
  return cat.is_op() ? pre_composition_matrix(a, D) : post_composition_matrix(a, D);
}

// x : tgt(a) → D with x ∘ a.
FpMatrix ext_matrix(const Cat& cat, const StableMap& a, const RModule& D) {
  return cat.is_op() ? post_composition_matrix(a, D) : pre_composition_matrix(a, D);
}

// Advance a base-p odometer; false after the last tuple.
bool next_tuple(Vec& t, int p) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    if (++t[static_cast<std::size_t>(i)] < p) return true;
    t[static_cast<std::size_t>(i)] = 0;
  }
  return false;
}

std::vector<StableMap> points(const StableHomSpace& H, const AffineSpace& A, std::uint64_t cap) {
  std::vector<StableMap> out;
  for (const Vec& c : enumerate_points(A, cap)) out.push_back(H.element(c));
  return out;
}

std::vector<Vec> independent(int p, int n, const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const Vec& v : vs) {
    if (vec_is_zero(v)) continue;
    if (!out.empty() && QuotientMap(p, n, out).contains(v)) continue;
    out.push_back(v);
  }
  return out;
}

// All composites b ∘ a for a ∈ A (in HA) and b ∈ B (in HB), using bilinearity.
void composite_set(const Cat& cat, const StableHomSpace& HA, const AffineSpace& A, const StableHomSpace& HB,
                   const AffineSpace& B, std::uint64_t cap, BracketSet& out) {
  const int p = HA.p();
  out.enumerated += checked_count(p, A.dim() + B.dim(), cap);
  StableMap a0 = HA.element(A.representative), b0 = HB.element(B.representative);
  std::vector<StableMap> as, bs;
  for (const Vec& v : A.basis) as.push_back(HA.element(v));
  for (const Vec& v : B.basis) bs.push_back(HB.element(v));
  Vec c00 = cat.compose(b0, a0).coords();
  std::vector<Vec> u, v;
  std::vector<std::vector<Vec>> w(bs.size());
  for (const StableMap& a : as) u.push_back(cat.compose(b0, a).coords());
  for (std::size_t k = 0; k < bs.size(); ++k) {
    v.push_back(cat.compose(bs[k], a0).coords());
    for (const StableMap& a : as) w[k].push_back(cat.compose(bs[k], a).coords());
  }
  Vec t(as.size(), 0), s(bs.size(), 0);
  std::set<Vec> seen;
  do {
    Vec ta = c00;
    for (std::size_t i = 0; i < as.size(); ++i)
      if (t[i]) ta = vec_add(ta, vec_scale(u[i], t[i], p), p);
    std::fill(s.begin(), s.end(), 0);
    do {
      Vec e = ta;
      for (std::size_t k = 0; k < bs.size(); ++k) {
        if (!s[k]) continue;
        e = vec_add(e, vec_scale(v[k], s[k], p), p);
        for (std::size_t i = 0; i < as.size(); ++i)
          if (t[i]) e = vec_add(e, vec_scale(w[k][i], static_cast<long long>(s[k]) * t[i], p), p);
      }
      seen.insert(e);
    } while (next_tuple(s, p));
  } while (next_tuple(t, p));
  out.elements.assign(seen.begin(), seen.end());
}

std::string describe(const std::string& a, const std::string& b) { return a + "*" + b + " is not stably zero"; }

void check_composable(const Cat& cat, const StableMap& g, const StableMap& f, const char* what) {
  if (!(cat.tgt(f) == cat.src(g))) throw DimensionMismatch(std::string("maps are not composable at ") + what);
}

BracketSet bracket_fc(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1,
                      std::uint64_t cap) {
  CTriangle c = canonical_cone(cat, f2);
  const RModule& C = cat.tgt(c.g);
  RModule SX0 = cat.shift(cat.src(f1));
  BracketSet out(cat.hom(SX0, cat.tgt(f3)));
  StableMap target = -cat.shift(f1);
  auto A = cat.solve_lift(c.h, target);
  auto B = cat.solve_extension(c.g, f3);
  if (!A) out.empty_reason = describe("f2", "f1");
  if (!B) out.empty_reason = out.empty_reason.empty() ? describe("f3", "f2") : out.empty_reason + "; " + describe("f3", "f2");
  if (!A || !B) return out;
  composite_set(cat, cat.hom(SX0, C), *A, cat.hom(C, cat.tgt(f3)), *B, cap, out);
  return out;
}

BracketSet bracket_cc(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1,
                      std::uint64_t cap) {
  CTriangle c = canonical_cone(cat, f1);
  const RModule& C = cat.tgt(c.g);
  RModule SX0 = cat.shift(cat.src(f1));
  const RModule& X3 = cat.tgt(f3);
  BracketSet out(cat.hom(SX0, X3));
  const int p = f1.p();
  auto Phi = cat.solve_extension(c.g, f2);
  if (!Phi) {
    out.empty_reason = describe("f2", "f1");
    return out;
  }
  if (!(cat.compose(f3, f2)).is_zero()) {
    out.empty_reason = describe("f3", "f2");
    return out;
  }
  StableHomSpace HPhi = cat.hom(C, cat.tgt(f2));
  FpMatrix E = ext_matrix(cat, c.h, X3);
  auto kern = solve_affine(E, Vec(static_cast<std::size_t>(E.rows()), 0));
  out.enumerated += checked_count(p, Phi->dim() + kern->dim(), cap);
  std::set<Vec> seen;
  for (const StableMap& phi : points(HPhi, *Phi, cap)) {
    auto psi = solve_affine(E, cat.compose(f3, phi).coords());
    if (!psi) throw Error("internal: cofiber extension failed");
    for (const Vec& v : enumerate_points(*psi, cap)) seen.insert(v);
  }
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

BracketSet bracket_ff(const StableMap& f3, const StableMap& f2, const StableMap& f1, std::uint64_t cap) {
  Triangle fib = fiber_triangle(f3);
  const RModule& F = fib.X();
  const RModule& X3 = f3.tgt();
  BracketSet out(StableHomSpace(shift(f1.src()), X3));
  const int p = f1.p();
  auto Gam = solve_lift(fib.f, f2);
  if (!Gam) {
    out.empty_reason = describe("f3", "f2");
    return out;
  }
  if (!(f2 * f1).is_zero()) {
    out.empty_reason = describe("f2", "f1");
    return out;
  }
  StableMap first = -(from_canonical_stable(F) * unshift(fib.h));
  StableHomSpace HGam(f2.src(), F), HDelta(f1.src(), first.src());
  FpMatrix L = post_composition_matrix(first, f1.src());
  auto kern = solve_affine(L, Vec(static_cast<std::size_t>(L.rows()), 0));
  out.enumerated += checked_count(p, Gam->dim() + kern->dim(), cap);
  StableMap back = from_canonical_stable(X3);
  std::set<Vec> seen;
  for (const StableMap& gamma : points(HGam, *Gam, cap)) {
    auto delta = solve_affine(L, (gamma * f1).coords());
    if (!delta) throw Error("internal: fiber lift failed");
    for (const StableMap& d : points(HDelta, *delta, cap)) seen.insert((back * shift(d)).coords());
  }
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace

CTriangle canonical_cone(const Cat& cat, const StableMap& f) { return cat.cone(f); }

bool is_distinguished(const Cat& cat, const CTriangle& t) {
  if (!cat.is_op()) return distinguished_by_comparison(Triangle{t.f, t.g, t.h, Provenance::Candidate});
  const RModule& X = t.f.tgt();
  const RModule& Z = t.g.src();
  StableMap w = shift(-(to_canonical_stable(Z) * t.h)) * to_canonical_stable(X);
  return distinguished_by_comparison(Triangle{t.g, t.f, w, Provenance::Candidate});
}

BracketSet bracket3(const StableMap& f3, const StableMap& f2, const StableMap& f1, BracketDefn defn,
                    std::uint64_t cap) {
  return bracket3(Cat::direct(), f3, f2, f1, defn, cap);
}

BracketSet bracket3(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1, BracketDefn defn,
                    std::uint64_t cap) {
  check_composable(cat, f2, f1, "X1");
  check_composable(cat, f3, f2, "X2");
  BracketSet out = [&] {
    switch (defn) {
      case BracketDefn::FC: return bracket_fc(cat, f3, f2, f1, cap);
      case BracketDefn::CC: return bracket_cc(cat, f3, f2, f1, cap);
      case BracketDefn::FF:
        if (cat.is_op()) throw Error("the ff bracket is computed in the direct variance only");
        return bracket_ff(f3, f2, f1, cap);
    }
    throw Error("unknown bracket definition");
  }();
  out.variance = cat.variance();
  out.definition = to_string(defn);
  out.indeterminacy_basis = indeterminacy(cat, f3, f2, f1);
  out.normalize();
  return out;
}

std::vector<Vec> indeterminacy(const StableMap& f3, const StableMap& f2, const StableMap& f1) {
  return indeterminacy(Cat::direct(), f3, f2, f1);
}

std::vector<Vec> indeterminacy(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1) {
  check_composable(cat, f2, f1, "X1");
  check_composable(cat, f3, f2, "X2");
  RModule SX0 = cat.shift(cat.src(f1));
  StableHomSpace amb = cat.hom(SX0, cat.tgt(f3));
  std::vector<Vec> gens;
  for (const StableMap& a : cat.hom(SX0, cat.src(f3)).basis()) gens.push_back(cat.compose(f3, a).coords());
  StableMap sf1 = cat.shift(f1);
  for (const StableMap& b : cat.hom(cat.tgt(sf1), cat.tgt(f3)).basis()) gens.push_back(cat.compose(b, sf1).coords());
  return independent(amb.p(), amb.dim(), gens);
}

bool bracket_contains(const StableMap& f3, const StableMap& f2, const StableMap& f1, const StableMap& e) {
  check_composable(Cat::direct(), f2, f1, "X1");
  check_composable(Cat::direct(), f3, f2, "X2");
  if (!(e.src() == shift(f1.src())) || !(e.tgt() == f3.tgt())) throw DimensionMismatch("map outside the ambient group");
  CTriangle c = canonical_cone(Cat::direct(), f2);
  auto A = solve_lift(c.h, -shift(f1));
  auto B = solve_extension(c.g, f3);
  if (!A || !B) return false;
  const RModule& C = c.g.tgt();
  StableMap e0 = StableHomSpace(C, f3.tgt()).element(B->representative) *
                 StableHomSpace(e.src(), C).element(A->representative);
  StableHomSpace amb(e.src(), e.tgt());
  return QuotientMap(amb.p(), amb.dim(), indeterminacy(f3, f2, f1)).contains((e - e0).coords());
}

std::vector<TodaFamilyElement> toda_family(const StableMap& f3, const StableMap& f2, const StableMap& f1,
                                           std::uint64_t cap) {
  return toda_family(Cat::direct(), f3, f2, f1, cap);
}

namespace {

struct FamilyData {
  CTriangle tri;
  std::vector<StableMap> alphas;
  std::vector<StableMap> betas;
};

FamilyData family_data(const Cat& cat, const CTriangle& c, const StableMap& f3, const StableMap& f1,
                       std::uint64_t cap, std::uint64_t& used) {
  FamilyData d{c, {}, {}};
  const RModule& C = cat.tgt(c.g);
  RModule SX0 = cat.shift(cat.src(f1));
  auto A = cat.solve_lift(c.h, -cat.shift(f1));
  auto B = cat.solve_extension(c.g, f3);
  if (!A || !B) return d;
  std::uint64_t n = checked_count(f1.p(), A->dim() + B->dim(), cap);
  used += n;
  if (used > cap) throw EnumerationOverflow(used, cap);
  d.alphas = points(cat.hom(SX0, C), *A, cap);
  d.betas = points(cat.hom(C, cat.tgt(f3)), *B, cap);
  return d;
}

std::vector<int> module_key(const RModule& M) {
  std::vector<int> k{M.dim()};
  k.insert(k.end(), M.X().data().begin(), M.X().data().end());
  return k;
}

std::vector<int> map_key(const StableMap& f) {
  std::vector<int> k = module_key(f.src());
  std::vector<int> t = module_key(f.tgt());
  k.insert(k.end(), t.begin(), t.end());
  k.push_back(static_cast<int>(f.coords().size()));
  k.insert(k.end(), f.coords().begin(), f.coords().end());
  return k;
}

class ConeCache {
 public:
  explicit ConeCache(const Cat& cat) : cat_(cat) {}
  const CTriangle& get(const StableMap& f) {
    std::vector<int> key = map_key(f);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, canonical_cone(cat_, f)).first;
    return it->second;
  }

 private:
  Cat cat_;
  std::map<std::vector<int>, CTriangle> cache_;
};

}  // namespace

std::vector<TodaFamilyElement> toda_family(const Cat& cat, const StableMap& f3, const StableMap& f2,
                                           const StableMap& f1, std::uint64_t cap) {
  check_composable(cat, f2, f1, "X1");
  check_composable(cat, f3, f2, "X2");
  std::uint64_t used = 0;
  FamilyData d = family_data(cat, canonical_cone(cat, f2), f3, f1, cap, used);
  std::vector<TodaFamilyElement> out;
  for (const StableMap& b : d.betas)
    for (const StableMap& a : d.alphas) out.push_back({cat.tgt(d.tri.g), a, b, d.tri});
  return out;
}

void validate_jseq(const std::vector<int>& jseq, int n) {
  if (static_cast<int>(jseq.size()) != n - 2)
    throw Error("j-sequence must have " + std::to_string(n - 2) + " entries, got " + std::to_string(jseq.size()));
  for (std::size_t i = 0; i < jseq.size(); ++i)
    if (jseq[i] < 0 || jseq[i] > static_cast<int>(i))
      throw Error("j-sequence entry j_" + std::to_string(i + 1) + " = " + std::to_string(jseq[i]) +
                  " violates 0 <= j_i < i");
}

std::vector<std::vector<int>> all_jseqs(int n) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 1; i <= n - 2; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& s : out)
      for (int j = 0; j < i; ++j) {
        auto t = s;
        t.push_back(j);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

int jseq_sign_exponent(const std::vector<int>& jseq) {
  int s = 0;
  for (int j : jseq) s += j;
  return s;
}

BracketSet higher_bracket(const std::vector<StableMap>& maps, const std::vector<int>& jseq, std::uint64_t cap) {
  return higher_bracket(Cat::direct(), maps, jseq, cap);
}

BracketSet higher_bracket(const Cat& cat, const std::vector<StableMap>& maps, const std::vector<int>& jseq,
                          std::uint64_t cap) {
  const int n = static_cast<int>(maps.size());
  if (n < 3) throw Error("higher_bracket needs at least three maps");
  for (int k = 0; k + 1 < n; ++k) check_composable(cat, maps[static_cast<std::size_t>(k)], maps[static_cast<std::size_t>(k + 1)], "an interior object");
  std::vector<int> js = jseq.empty() ? std::vector<int>(static_cast<std::size_t>(n - 2), 0) : jseq;
  validate_jseq(js, n);
  BracketSet out(cat.hom(cat.shift(cat.src(maps.back()), n - 2), cat.tgt(maps.front())));
  out.variance = cat.variance();
  out.definition = "higher";
  out.jseq = js;
  ConeCache cones(cat);
  std::vector<std::vector<StableMap>> level{maps};
  for (int i = n - 2; i >= 1; --i) {
    const int j = js[static_cast<std::size_t>(i - 1)];
    std::map<std::vector<int>, std::vector<StableMap>> next;
    std::uint64_t used = 0;
    for (const auto& tup : level) {
      const StableMap& f3 = tup[static_cast<std::size_t>(j)];
      const StableMap& f2 = tup[static_cast<std::size_t>(j + 1)];
      const StableMap& f1 = tup[static_cast<std::size_t>(j + 2)];
      FamilyData d = family_data(cat, cones.get(f2), f3, f1, cap, used);
      std::vector<StableMap> right;
      for (std::size_t k = static_cast<std::size_t>(j + 3); k < tup.size(); ++k) right.push_back(cat.shift(tup[k]));
      for (const StableMap& b : d.betas)
        for (const StableMap& a : d.alphas) {
          std::vector<StableMap> t(tup.begin(), tup.begin() + j);
          t.push_back(b);
          t.push_back(a);
          t.insert(t.end(), right.begin(), right.end());
          std::vector<int> key;
          for (const StableMap& f : t) {
            std::vector<int> mk = map_key(f);
            key.insert(key.end(), mk.begin(), mk.end());
          }
          next.emplace(std::move(key), std::move(t));
        }
    }
    out.enumerated += used;
    if (next.empty()) {
      out.empty_reason = "Toda family empty at reduction T_" + std::to_string(j) + " (stage " +
                         std::to_string(n - 1 - i) + ")";
      return out;
    }
    level.clear();
    for (auto& kv : next) level.push_back(std::move(kv.second));
  }
  for (const auto& tup : level) out.insert(cat.compose(tup[0], tup[1]).coords());
  out.normalize();
  return out;
}

BracketSet bracket3_restricted(const StableMap& f3, const StableMap& f2, const StableMap& f1, const Prescribed& fixed,
                               std::uint64_t cap) {
  return bracket3_restricted(Cat::direct(), f3, f2, f1, fixed, cap);
}

BracketSet bracket3_restricted(const Cat& cat, const StableMap& f3, const StableMap& f2, const StableMap& f1,
                               const Prescribed& fixed, std::uint64_t cap) {
  check_composable(cat, f2, f1, "X1");
  check_composable(cat, f3, f2, "X2");
  CTriangle c = canonical_cone(cat, f2);
  const RModule& C = cat.tgt(c.g);
  RModule SX0 = cat.shift(cat.src(f1));
  BracketSet out(cat.hom(SX0, cat.tgt(f3)));
  out.variance = cat.variance();
  std::set<Vec> seen;
  if (fixed.kind == Prescribed::Kind::SigmaAlpha) {
    out.definition = "restricted-alpha";
    const StableMap& sa = fixed.map;
    if (!(cat.src(sa) == SX0) || !(cat.tgt(sa) == C)) throw DimensionMismatch("prescribed map is not Σ X0 → C_f2");
    if (!(cat.compose(c.h, sa) == -cat.shift(f1)))
      throw Error("prescribed sigma_alpha does not lift -Σf1 through the cone of f2");
    auto B = cat.solve_extension(c.g, f3);
    if (!B) {
      out.empty_reason = describe("f3", "f2");
      return out;
    }
    out.enumerated += checked_count(f1.p(), B->dim(), cap);
    for (const StableMap& b : points(cat.hom(C, cat.tgt(f3)), *B, cap)) seen.insert(cat.compose(b, sa).coords());
  } else {
    out.definition = "restricted-beta";
    const StableMap& b = fixed.map;
    if (!(cat.src(b) == C) || !(cat.tgt(b) == cat.tgt(f3))) throw DimensionMismatch("prescribed map is not C_f2 → X3");
    if (!(cat.compose(b, c.g) == f3)) throw Error("prescribed beta does not extend f3 over the cone of f2");
    auto A = cat.solve_lift(c.h, -cat.shift(f1));
    if (!A) {
      out.empty_reason = describe("f2", "f1");
      return out;
    }
    out.enumerated += checked_count(f1.p(), A->dim(), cap);
    for (const StableMap& a : points(cat.hom(SX0, C), *A, cap)) seen.insert(cat.compose(b, a).coords());
  }
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

OctahedronStage octahedron(const Cat& cat, const CTriangle& a, const CTriangle& b, std::uint64_t cap) {
  if (!(cat.tgt(a.g) == cat.src(b.f))) throw DimensionMismatch("octahedron: triangles do not share Z_b");
  StableMap u = cat.compose(b.f, a.g);
  CTriangle c = canonical_cone(cat, u);
  const RModule& W = cat.tgt(c.g);
  const RModule& Zb1 = cat.tgt(b.g);
  RModule SZa = cat.shift(cat.src(a.f));
  FpMatrix Aa = vstack(lift_matrix(cat, c.h, SZa), ext_matrix(cat, a.h, W));
  Vec ra = (-cat.shift(a.f)).coords();
  Vec ra2 = cat.compose(c.g, b.f).coords();
  ra.insert(ra.end(), ra2.begin(), ra2.end());
  FpMatrix Ab = vstack(ext_matrix(cat, c.g, Zb1), lift_matrix(cat, b.h, W));
  Vec rb = b.g.coords();
  Vec rb2 = cat.compose(cat.shift(a.g), c.h).coords();
  rb.insert(rb.end(), rb2.begin(), rb2.end());
  auto As = solve_affine(Aa, ra);
  auto Bs = solve_affine(Ab, rb);
  if (!As || !Bs) throw Error("octahedron solve failure: inconsistent input triangles");
  StableMap gamma = cat.compose(cat.shift(a.h), b.h);
  checked_count(u.p(), As->dim() + Bs->dim(), cap);
  StableHomSpace HA = cat.hom(SZa, W), HB = cat.hom(W, Zb1);
  std::vector<StableMap> betas = points(HB, *Bs, cap);
  for (const StableMap& alpha : points(HA, *As, cap))
    for (const StableMap& beta : betas)
      if (is_distinguished(cat, CTriangle{alpha, beta, gamma})) return {W, c.g, c.h, alpha, beta, gamma};
  throw Error("octahedron solve failure: no distinguished completion");
}

namespace {

CTriangle shift_triangle(const Cat& cat, const CTriangle& t) {
  return {cat.shift(t.f), cat.shift(t.g), -cat.shift(t.h)};
}

}  // namespace

BracketSet restricted_higher_bracket(RestrictedBracketTrace& trace, const StableMap& x, std::uint64_t cap) {
  const Cat& cat = trace.cat;
  std::vector<CTriangle> tris = trace.triangles;
  if (tris.empty()) throw Error("restricted bracket needs at least one triangle");
  for (std::size_t i = 0; i + 1 < tris.size(); ++i)
    if (!(cat.tgt(tris[i].g) == cat.src(tris[i + 1].f)))
      throw DimensionMismatch("restricted bracket: triangle " + std::to_string(i + 1) + " does not meet the next");
  if (!(cat.src(trace.g) == cat.tgt(tris.back().g))) throw DimensionMismatch("restricted bracket: g has wrong source");
  if (!(cat.tgt(x) == cat.tgt(tris.front().f))) throw DimensionMismatch("restricted bracket: x has wrong target");
  trace.stages.clear();
  StableMap xs = x;
  const int n0 = static_cast<int>(tris.size()) + 1;
  RModule src = cat.shift(cat.src(x), n0 - 2);
  BracketSet out(cat.hom(src, cat.tgt(trace.g)));
  out.variance = cat.variance();
  out.definition = "restricted";
  if (n0 == 2) {
    out.insert(cat.compose(trace.g, cat.compose(tris[0].g, x)).coords());
    out.enumerated = 1;
    return out;
  }
  while (tris.size() > 2) {
    const std::size_t n = tris.size() + 1;
    OctahedronStage st = octahedron(cat, tris[n - 3], tris[n - 2], cap);
    trace.stages.push_back(st);
    std::vector<CTriangle> next;
    for (std::size_t i = 0; i + 3 < n; ++i) next.push_back(shift_triangle(cat, tris[i]));
    next.push_back({st.alpha, st.beta, st.gamma});
    tris = std::move(next);
    xs = cat.shift(xs);
  }
  OctahedronStage st = octahedron(cat, tris[0], tris[1], cap);
  trace.stages.push_back(st);
  StableMap target = -cat.shift(xs);
  auto lifts = cat.solve_lift(st.iota, target);
  if (!lifts) {
    out.empty_reason = "-Σx does not lift through the final octahedron";
    return out;
  }
  out.enumerated += checked_count(x.p(), lifts->dim(), cap);
  StableMap gb = cat.compose(trace.g, st.beta);
  for (const StableMap& y : points(cat.hom(cat.src(target), st.W), *lifts, cap))
    out.insert(cat.compose(gb, y).coords());
  out.normalize();
  return out;
}

namespace {

struct WitnessStage {
  CTriangle cone;
  StableMap beta;
  StableMap sigma_alpha;
};

bool find_chain(const std::vector<StableMap>& tup, const Vec& target, std::uint64_t cap, std::uint64_t& used,
                std::vector<WitnessStage>& chain) {
  const Cat cat = Cat::direct();
  if (tup.size() == 2) return (tup[0] * tup[1]).coords() == target;
  CTriangle c = canonical_cone(cat, tup[1]);
  FamilyData d = family_data(cat, c, tup[0], tup[2], cap, used);
  std::vector<StableMap> right;
  for (std::size_t k = 3; k < tup.size(); ++k) right.push_back(shift(tup[k]));
  for (const StableMap& b : d.betas)
    for (const StableMap& a : d.alphas) {
      std::vector<StableMap> t{b, a};
      t.insert(t.end(), right.begin(), right.end());
      chain.push_back({c, b, a});
      if (find_chain(t, target, cap, used, chain)) return true;
      chain.pop_back();
    }
  return false;
}

void require(bool ok, const std::string& what, std::vector<std::string>& log) {
  if (!ok) throw Error("filtered witness verification failed: " + what);
  log.push_back(what);
}

}  // namespace

FilteredObject filtered_witness(const std::vector<StableMap>& maps, const StableMap& element, std::uint64_t cap) {
  const int n = static_cast<int>(maps.size());
  if (n < 3) throw Error("filtered_witness needs at least three maps");
  for (int k = 0; k + 1 < n; ++k)
    if (!(maps[static_cast<std::size_t>(k)].src() == maps[static_cast<std::size_t>(k + 1)].tgt()))
      throw DimensionMismatch("filtered_witness: maps are not composable");
  std::vector<WitnessStage> chain;
  std::uint64_t used = 0;
  if (!find_chain(maps, element.coords(), cap, used, chain))
    throw Error("filtered_witness: element is not in the standard bracket");
  FilteredObject W;
  W.ring = element.src().ring();
  W.F.push_back(zero_module(W.ring));
  W.F.push_back(maps[1].tgt());
  W.q.push_back(-stable_identity(maps[1].tgt()));
  for (const WitnessStage& st : chain) {
    W.F.push_back(st.cone.g.tgt());
    W.i.push_back(st.cone.g);
    W.q.push_back(st.cone.h);
    W.e.push_back(-shift(st.cone.f));
  }
  W.sigma = W.q.back();
  StableMap chain_map = stable_identity(maps[1].tgt());
  for (const StableMap& i : W.i) chain_map = i * chain_map;
  W.sigma_prime = -chain_map;
  W.a = -chain.back().sigma_alpha;
  W.b = -chain.back().beta;
  require(is_stable_iso(W.q[0]), "q_1 : F_1 → X_{n-1} is an isomorphism", W.checks);
  for (std::size_t j = 0; j < W.i.size(); ++j) {
    Triangle t{W.i[j], W.q[j + 1], W.e[j], Provenance::Candidate};
    require(distinguished_by_comparison(t), "triangle F_" + std::to_string(j + 1) + " → F_" + std::to_string(j + 2) +
                                                " is distinguished", W.checks);
    const int jj = static_cast<int>(j) + 1;
    StableMap lhs = shift(W.q[j]) * W.e[j];
    StableMap rhs = shift(maps[j + 1], jj);
    require(lhs == rhs, "(Σq_" + std::to_string(jj) + ") e_" + std::to_string(jj) + " = Σ^" + std::to_string(jj) +
                            " f_" + std::to_string(n - jj), W.checks);
  }
  require(W.sigma * W.a == shift(maps.back(), n - 2), "σ a = Σ^{n-2} f_1", W.checks);
  require(W.b * W.sigma_prime == maps.front(), "b σ' = f_n", W.checks);
  require(W.b * W.a == element, "b a = element", W.checks);
  return W;
}

}  // namespace stm
