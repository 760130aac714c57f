#include "stm/stcat.hpp"

#include <algorithm>

namespace stm {

StableHomSpace::StableHomSpace(RModule src, RModule tgt) : src_(std::move(src)), tgt_(std::move(tgt)) {
  require_same_ring(src_, tgt_);
  const int m = src_.m();
  for (int s = 0; s < src_.num_blocks(); ++s)
    for (int t = 0; t < tgt_.num_blocks(); ++t) {
      const int a = src_.block_sizes()[s], b = tgt_.block_sizes()[t];
      for (int j = std::max(0, b - a); j < std::min(b, m - a); ++j) slots_.push_back({s, t, j});
    }
}

Vec StableHomSpace::coords(const RMap& f) const {
  if (!(f.src() == src_) || !(f.tgt() == tgt_)) throw DimensionMismatch("map does not belong to this hom space");
  const JordanData& js = src_.jordan();
  const JordanData& jt = tgt_.jordan();
  FpMatrix B = f.A();
  if (!jt.canonical) B = jt.Sinv * B;
  if (!js.canonical) B = B * js.S;
  Vec c;
  c.reserve(slots_.size());
  for (const StableSlot& sl : slots_) c.push_back(B(jt.offsets[sl.tgt_block] + sl.j, js.offsets[sl.src_block]));
  return c;
}

RMap StableHomSpace::representative(const Vec& coords) const {
  if (coords.size() != slots_.size())
    throw DimensionMismatch("expected " + std::to_string(slots_.size()) + " stable coordinates, got " +
                            std::to_string(coords.size()));
  std::vector<std::vector<Vec>> polys(tgt_.num_blocks(), std::vector<Vec>(src_.num_blocks()));
  for (int t = 0; t < tgt_.num_blocks(); ++t)
    for (int s = 0; s < src_.num_blocks(); ++s) polys[t][s] = Vec(tgt_.block_sizes()[t], 0);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const StableSlot& sl = slots_[i];
    polys[sl.tgt_block][sl.src_block][sl.j] = fp::reduce(coords[i], p());
  }
  return map_from_blocks(src_, tgt_, polys);
}

StableMap StableHomSpace::element(const Vec& coords) const {
  Vec c(coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = fp::reduce(coords[i], p());
  return StableMap(representative(c), c);
}

StableMap StableHomSpace::zero() const { return element(Vec(slots_.size(), 0)); }

std::vector<StableMap> StableHomSpace::basis() const {
  std::vector<StableMap> out;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    Vec c(slots_.size(), 0);
    c[i] = 1;
    out.push_back(element(c));
  }
  return out;
}

std::vector<std::string> StableHomSpace::basis_labels() const {
  std::vector<std::string> out;
  const bool cyclic = src_.num_blocks() == 1 && tgt_.num_blocks() == 1;
  for (const StableSlot& sl : slots_) {
    std::string s = sl.j == 0 ? "mu(1)" : sl.j == 1 ? "mu(x)" : "mu(x^" + std::to_string(sl.j) + ")";
    if (!cyclic) s += "[" + std::to_string(sl.src_block) + "->" + std::to_string(sl.tgt_block) + "]";
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RMap> StableHomSpace::hom_basis() const { return stm::hom_basis(src_, tgt_); }

std::vector<RMap> StableHomSpace::phom_basis() const {
  Cover cov = projective_cover(tgt_);
  const int len = tgt_.dim() * src_.dim();
  std::vector<Vec> chosen;
  std::vector<RMap> out;
  for (const RMap& h : stm::hom_basis(src_, cov.P)) {
    RMap g = compose(cov.p, h);
    if (!chosen.empty() && QuotientMap(p(), len, chosen).contains(g.A().data())) continue;
    if (g.A().is_zero()) continue;
    chosen.push_back(g.A().data());
    out.push_back(std::move(g));
  }
  return out;
}

bool StableHomSpace::factors_through_projective(const RMap& f) const {
  std::vector<Vec> span;
  for (const RMap& g : phom_basis()) span.push_back(g.A().data());
  return QuotientMap(p(), tgt_.dim() * src_.dim(), span).contains(f.A().data());
}

StableMap::StableMap(RMap rep) : rep_(std::move(rep)) { coords_ = StableHomSpace(rep_.src(), rep_.tgt()).coords(rep_); }

StableMap::StableMap(RMap rep, Vec coords) : rep_(std::move(rep)), coords_(std::move(coords)) {}

bool operator==(const StableMap& a, const StableMap& b) {
  return a.src() == b.src() && a.tgt() == b.tgt() && a.coords() == b.coords();
}

StableMap operator*(const StableMap& g, const StableMap& f) { return StableMap(compose(g.rep(), f.rep())); }

StableMap operator+(const StableMap& a, const StableMap& b) {
  return StableMap(a.rep() + b.rep(), vec_add(a.coords(), b.coords(), a.p()));
}

StableMap operator-(const StableMap& a, const StableMap& b) {
  return StableMap(a.rep() - b.rep(), vec_sub(a.coords(), b.coords(), a.p()));
}

StableMap operator-(const StableMap& a) { return StableMap(-a.rep(), vec_scale(a.coords(), -1, a.p())); }

StableMap scale(const StableMap& a, long long s) {
  return StableMap(stm::scale(a.rep(), s), vec_scale(a.coords(), s, a.p()));
}

StableHomSpace stable_hom(const RModule& M, const RModule& N) { return StableHomSpace(M, N); }

bool stably_equal(const StableMap& f, const StableMap& g) {
  if (!(f.src() == g.src()) || !(f.tgt() == g.tgt())) throw DimensionMismatch("stably_equal: shapes differ");
  return f.coords() == g.coords();
}

bool is_stably_zero(const StableMap& f) { return f.is_zero(); }

bool is_stably_zero(const RModule& M) { return is_projective(M); }

StableMap stable_identity(const RModule& M) { return StableMap(identity_map(M)); }

StableMap stable_zero(const RModule& M, const RModule& N) { return StableHomSpace(M, N).zero(); }

static RModule complement_module(const RModule& M) {
  std::vector<int> parts;
  for (int a : M.block_sizes())
    if (a < M.m()) parts.push_back(M.m() - a);
  return module_from_partition(M.ring(), parts);
}

RModule shift(const RModule& M) { return complement_module(M); }
RModule unshift(const RModule& M) { return complement_module(M); }

RModule shift(const RModule& M, int n) {
  RModule X = M;
  for (int i = 0; i < n; ++i) X = shift(X);
  for (int i = 0; i > n; --i) X = unshift(X);
  return X;
}

// On stable coordinates both Σ and Ω send x^j : R/x^a → R/x^b to x^{j+a−b} : R/x^{m−a} → R/x^{m−b}.
static StableMap complement_map(const StableMap& f) {
  const RModule& M = f.src();
  const RModule& N = f.tgt();
  const int m = M.m();
  RModule SM = shift(M), SN = shift(N);
  auto index_map = [m](const RModule& X) {
    std::vector<int> idx;
    int t = 0;
    for (int a : X.block_sizes()) idx.push_back(a == m ? -1 : t++);
    return idx;
  };
  std::vector<int> is = index_map(M), it = index_map(N);
  StableHomSpace from(M, N), to(SM, SN);
  std::vector<std::vector<Vec>> polys(SN.num_blocks(), std::vector<Vec>(SM.num_blocks()));
  for (int t = 0; t < SN.num_blocks(); ++t)
    for (int s = 0; s < SM.num_blocks(); ++s) polys[t][s] = Vec(SN.block_sizes()[t], 0);
  for (std::size_t i = 0; i < from.slots().size(); ++i) {
    const StableSlot& sl = from.slots()[i];
    const int a = M.block_sizes()[sl.src_block], b = N.block_sizes()[sl.tgt_block];
    polys[it[sl.tgt_block]][is[sl.src_block]][sl.j + a - b] = f.coords()[i];
  }
  return StableMap(map_from_blocks(SM, SN, polys));
}

StableMap shift(const StableMap& f) { return complement_map(f); }
StableMap unshift(const StableMap& f) { return complement_map(f); }

StableMap shift(const StableMap& f, int n) {
  StableMap g = f;
  for (int i = 0; i < (n < 0 ? -n : n); ++i) g = complement_map(g);
  return g;
}

StableMap to_canonical_stable(const RModule& M) { return StableMap(to_canonical(M)); }
StableMap from_canonical_stable(const RModule& M) { return StableMap(from_canonical(M)); }

FpMatrix post_composition_matrix(const StableMap& a, const RModule& from) {
  StableHomSpace dom(from, a.src()), cod(from, a.tgt());
  FpMatrix M(a.p(), cod.dim(), dom.dim());
  std::vector<StableMap> basis = dom.basis();
  for (int i = 0; i < dom.dim(); ++i) {
    Vec c = cod.coords(compose(a.rep(), basis[i].rep()));
    for (int r = 0; r < cod.dim(); ++r) M.set(r, i, c[r]);
  }
  return M;
}

FpMatrix pre_composition_matrix(const StableMap& a, const RModule& to) {
  StableHomSpace dom(a.tgt(), to), cod(a.src(), to);
  FpMatrix M(a.p(), cod.dim(), dom.dim());
  std::vector<StableMap> basis = dom.basis();
  for (int i = 0; i < dom.dim(); ++i) {
    Vec c = cod.coords(compose(basis[i].rep(), a.rep()));
    for (int r = 0; r < cod.dim(); ++r) M.set(r, i, c[r]);
  }
  return M;
}

std::optional<AffineSpace> solve_lift(const StableMap& a, const StableMap& b) {
  if (!(a.tgt() == b.tgt())) throw DimensionMismatch("solve_lift: targets differ");
  return solve_affine(post_composition_matrix(a, b.src()), b.coords());
}

std::optional<AffineSpace> solve_extension(const StableMap& a, const StableMap& b) {
  if (!(a.src() == b.src())) throw DimensionMismatch("solve_extension: sources differ");
  return solve_affine(pre_composition_matrix(a, b.tgt()), b.coords());
}

std::optional<StableMap> stable_inverse(const StableMap& f) {
  auto left = solve_extension(f, stable_identity(f.src()));
  if (!left) return std::nullopt;
  StableMap g = StableHomSpace(f.tgt(), f.src()).element(left->representative);
  if (!(f * g == stable_identity(f.tgt()))) return std::nullopt;
  return g;
}

Triangle cone_triangle(const StableMap& f) {
  const RModule& M = f.src();
  const RModule& N = f.tgt();
  Cosyzygy sig = sigma(M);
  const RModule& I = sig.envelope.I;
  RMap stabilized = vcat(f.rep(), sig.envelope.iota);
  QuotientData Q = cokernel(stabilized);
  RMap q = compose(Q.proj, inclusion_first(N, I));
  RMap h(Q.module, sig.module, sig.proj.A() * projection_second(N, I).A() * Q.section);
  return {f, StableMap(q), StableMap(h), Provenance::Constructed};
}

Triangle fiber_triangle(const StableMap& f) {
  const RModule& M = f.src();
  const RModule& N = f.tgt();
  Cover cov = projective_cover(N);
  RMap stabilized = hcat(f.rep(), cov.p);
  SubmoduleData K = kernel(stabilized);
  RMap k = compose(projection_first(M, cov.P), K.incl);
  Cosyzygy sig = sigma(K.module);
  auto phi = extend_along(K.incl, sig.envelope.iota);
  if (!phi) throw Error("internal: injective extension failed");
  const int p = f.p();
  FpMatrix L(p, stabilized.src().dim(), N.dim());
  for (int i = 0; i < N.dim(); ++i) {
    Vec e(N.dim(), 0);
    e[i] = 1;
    auto sol = solve_affine(stabilized.A(), e);
    if (!sol) throw Error("internal: stabilized map is not surjective");
    for (int r = 0; r < L.rows(); ++r) L.set(r, i, sol->representative[r]);
  }
  RMap w(N, sig.module, sig.proj.A() * phi->A() * L);
  return {StableMap(k), f, StableMap(w), Provenance::Constructed};
}

Triangle rotate(const Triangle& t, int steps) {
  Triangle r = t;
  for (int i = 0; i < steps; ++i) r = Triangle{r.g, r.h, -shift(r.f), r.provenance};
  for (int i = 0; i > steps; --i) {
    StableMap first = -(from_canonical_stable(r.X()) * unshift(r.h));
    StableMap last = to_canonical_stable(r.Z()) * r.g;
    r = Triangle{first, r.f, last, r.provenance};
  }
  return r;
}

bool consecutive_composites_vanish(const Triangle& t) {
  return (t.g * t.f).is_zero() && (t.h * t.g).is_zero() && ((-shift(t.f)) * t.h).is_zero();
}

bool is_stable_iso(const StableMap& f) { return is_projective(cone_triangle(f).Z()); }

bool distinguished_by_comparison(const Triangle& t) {
  if (!(t.h.tgt() == shift(t.X())) || !(t.g.src() == t.Y()) || !(t.h.src() == t.Z()))
    throw DimensionMismatch("triangle maps are not composable");
  Triangle c = cone_triangle(t.f);
  FpMatrix A = pre_composition_matrix(c.g, t.Z());
  FpMatrix B = post_composition_matrix(t.h, c.Z());
  Vec rhs = t.g.coords();
  rhs.insert(rhs.end(), c.h.coords().begin(), c.h.coords().end());
  auto sol = solve_affine(vstack(A, B), rhs);
  if (!sol) return false;
  return is_stable_iso(StableHomSpace(c.Z(), t.Z()).element(sol->representative));
}

StableMap Cat::compose(const StableMap& g, const StableMap& f) const { return is_op() ? f * g : g * f; }

StableHomSpace Cat::hom(const RModule& A, const RModule& B) const {
  return is_op() ? StableHomSpace(B, A) : StableHomSpace(A, B);
}

RModule Cat::shift(const RModule& X) const { return is_op() ? stm::unshift(X) : stm::shift(X); }
StableMap Cat::shift(const StableMap& f) const { return is_op() ? stm::unshift(f) : stm::shift(f); }

RModule Cat::shift(const RModule& X, int n) const { return stm::shift(X, is_op() ? -n : n); }
StableMap Cat::shift(const StableMap& f, int n) const { return stm::shift(f, n); }

CTriangle Cat::cone(const StableMap& f) const {
  if (!is_op()) {
    Triangle t = cone_triangle(f);
    return {t.f, t.g, t.h};
  }
  Triangle t = fiber_triangle(f);
  StableMap iota = -(from_canonical_stable(t.X()) * stm::unshift(t.h));
  return {f, t.f, iota};
}

std::optional<AffineSpace> Cat::solve_lift(const StableMap& a, const StableMap& b) const {
  return is_op() ? stm::solve_extension(a, b) : stm::solve_lift(a, b);
}

std::optional<AffineSpace> Cat::solve_extension(const StableMap& a, const StableMap& b) const {
  return is_op() ? stm::solve_lift(a, b) : stm::solve_extension(a, b);
}

StableMap Cat::element(const RModule& A, const RModule& B, const Vec& coords) const {
  return hom(A, B).element(coords);
}

StableMap transport_from_op(const StableMap& f, int n, const RModule& X) {
  if (n == 0) return f;
  return from_canonical_stable(X) * shift(f, n);
}

}  // namespace stm
