#include "stm/adams.hpp"

#include <algorithm>

namespace stm {

int mod2(int n) { return ((n % 2) + 2) % 2; }

namespace {

RModule sh(const RModule& M, int n) { return mod2(n) ? shift(M) : M; }
StableMap sh(const StableMap& f, int n) { return mod2(n) ? shift(f) : f; }

std::vector<int> sorted_type(const RModule& M) {
  std::vector<int> t = jordan_type(nonprojective_part(M));
  std::sort(t.begin(), t.end());
  return t;
}

bool in_span(int p, int n, const std::vector<Vec>& span, const Vec& v) {
  if (span.empty()) return vec_is_zero(v);
  return QuotientMap(p, n, span).contains(v);
}

void add_independent(int p, int n, std::vector<Vec>& span, const Vec& v) {
  if (!in_span(p, n, span, v)) span.push_back(v);
}

std::vector<Vec> columns(const FpMatrix& A) {
  std::vector<Vec> out;
  for (int c = 0; c < A.cols(); ++c) out.push_back(A.column(c));
  return out;
}

std::vector<Vec> unit_vectors(int n) {
  std::vector<Vec> out;
  for (int k = 0; k < n; ++k) {
    Vec e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(k)] = 1;
    out.push_back(e);
  }
  return out;
}

// Kernel of a linear map given by a matrix with possibly zero rows.
std::vector<Vec> kernel_of(const FpMatrix& A) {
  if (A.rows() == 0) return unit_vectors(A.cols());
  return kernel_basis(A);
}

}  // namespace

ProjectiveClass ghost_class(const RModule& G) {
  ProjectiveClass cls;
  std::vector<int> parts = jordan_type(nonprojective_part(G));
  cls.generator = module_from_partition(G.ring(), parts);
  cls.period = sorted_type(shift(cls.generator)) == sorted_type(cls.generator) ? 1 : 2;
  return cls;
}

bool is_p_null(const ProjectiveClass& cls, const StableMap& f) {
  for (int n = 0; n < cls.period; ++n)
    if (!post_composition_matrix(f, sh(cls.generator, n)).is_zero()) return false;
  return true;
}

bool is_p_epic(const ProjectiveClass& cls, const StableMap& f) {
  for (int n = 0; n < cls.period; ++n) {
    FpMatrix A = post_composition_matrix(f, sh(cls.generator, n));
    if (rank(A) != A.rows()) return false;
  }
  return true;
}

GhostCover ghost_cover(const RModule& M, const ProjectiveClass& cls) {
  const int p = M.p();
  const int per = cls.period;
  std::vector<StableHomSpace> H;
  for (int n = 0; n < per; ++n) H.emplace_back(sh(cls.generator, n), M);
  std::vector<std::vector<Vec>> reached(static_cast<std::size_t>(per));
  std::vector<StableMap> gens;
  GhostCover out;
  for (int n = 0; n < per; ++n) {
    for (const StableMap& b : H[static_cast<std::size_t>(n)].basis()) {
      if (in_span(p, H[static_cast<std::size_t>(n)].dim(), reached[static_cast<std::size_t>(n)], b.coords())) continue;
      gens.push_back(b);
      out.degrees.push_back(n);
      for (int n2 = 0; n2 < per; ++n2)
        for (const StableMap& phi : StableHomSpace(sh(cls.generator, n2), b.src()).basis())
          add_independent(p, H[static_cast<std::size_t>(n2)].dim(), reached[static_cast<std::size_t>(n2)],
                          (b * phi).coords());
    }
  }
  if (gens.empty()) {
    out.P = zero_module(M.ring());
    out.p = stable_zero(out.P, M);
    return out;
  }
  std::vector<int> blocks;
  RMap cover = gens[0].rep();
  for (std::size_t k = 1; k < gens.size(); ++k) cover = hcat(cover, gens[k].rep());
  for (const StableMap& b : gens)
    for (int a : b.src().block_sizes()) blocks.push_back(a);
  out.P = module_from_partition(M.ring(), blocks);
  out.p = StableMap(RMap(out.P, M, cover.A()));
  return out;
}

Triangle AdamsResolution::triangle(int s) const {
  return Triangle{p.at(static_cast<std::size_t>(s)), i.at(static_cast<std::size_t>(s)),
                  delta.at(static_cast<std::size_t>(s)), Provenance::Constructed};
}

StableMap AdamsResolution::d1(int s) const {
  return delta.at(static_cast<std::size_t>(s)) * p.at(static_cast<std::size_t>(s + 1));
}

CTriangle AdamsResolution::op_triangle(int s) const {
  const auto k = static_cast<std::size_t>(s);
  return {p.at(k), shift(delta.at(k)), shift(i.at(k))};
}

AdamsResolution adams_resolution(const RModule& M, const ProjectiveClass& cls, int length) {
  if (length < 1) throw Error("resolution length must be at least 1");
  AdamsResolution res;
  res.cls = cls;
  res.X.push_back(M);
  for (int s = 0; s < length; ++s) {
    GhostCover c = ghost_cover(res.X.back(), cls);
    Triangle fib = fiber_triangle(c.p);
    res.P.push_back(c.P);
    res.degrees.push_back(c.degrees);
    res.p.push_back(c.p);
    res.fiber.push_back(fib.X());
    res.fiber_map.push_back(fib.f);
    res.i.push_back(fib.h);
    res.delta.push_back(-shift(fib.f));
    res.X.push_back(fib.h.tgt());
  }
  return res;
}

AdamsSS::AdamsSS(AdamsResolution res, RModule Y) : res_(std::move(res)), Y_(std::move(Y)) {
  if (!(shift(Y_, 2) == Y_)) throw Error("target must be canonical without projective summands");
}

StableHomSpace AdamsSS::D1(int s, int n) const {
  return StableHomSpace(sh(res_.X.at(static_cast<std::size_t>(s)), n), Y_);
}

StableHomSpace AdamsSS::E(int s, int n) const {
  return StableHomSpace(sh(res_.P.at(static_cast<std::size_t>(s)), n), Y_);
}

StableHomSpace AdamsSS::E1(int s, int t) const {
  if (s < 0 || s >= length()) throw Error("E_1 degree s=" + std::to_string(s) + " outside the resolution");
  return E(s, t - s);
}

FpMatrix AdamsSS::i_star(int s, int n) const {
  return pre_composition_matrix(sh(res_.i.at(static_cast<std::size_t>(s)), n), Y_);
}

FpMatrix AdamsSS::i_chain(int from, int to, int n) const {
  FpMatrix A = FpMatrix::identity(Y_.p(), D1(from, n).dim());
  for (int k = from - 1; k >= to; --k) A = i_star(k, n) * A;
  return A;
}

FpMatrix AdamsSS::p_star(int s, int n) const {
  return pre_composition_matrix(sh(res_.p.at(static_cast<std::size_t>(s)), n), Y_);
}

FpMatrix AdamsSS::delta_star(int s, int n) const {
  return pre_composition_matrix(sh(res_.delta.at(static_cast<std::size_t>(s)), n - 1), Y_);
}

std::vector<Vec> AdamsSS::cycles(int r, int s, int t) const {
  if (!in_range(r, s)) throw Error("E_" + std::to_string(r) + " at s=" + std::to_string(s) + " needs a longer resolution");
  const int n = mod2(t - s);
  const int dimE = E(s, n).dim();
  if (r == 1) return unit_vectors(dimE);
  FpMatrix chain = i_chain(s + r, s + 1, n - 1);
  FpMatrix dstar = delta_star(s, n);
  QuotientMap Q(Y_.p(), dstar.rows(), columns(chain));
  std::vector<Vec> cols;
  for (int c = 0; c < dimE; ++c) cols.push_back(Q.coords(dstar.column(c)));
  return kernel_of(FpMatrix::from_columns(Y_.p(), Q.quotient_dim(), cols));
}

std::vector<Vec> AdamsSS::boundaries(int r, int s, int t) const {
  if (s < 0 || s >= length()) throw Error("E_1 degree s=" + std::to_string(s) + " outside the resolution");
  const int n = mod2(t - s);
  const int k = std::min(r - 1, s);
  std::vector<Vec> out;
  if (k == 0) return out;
  FpMatrix P = p_star(s, n);
  for (const Vec& z : kernel_of(i_chain(s, s - k, n))) add_independent(Y_.p(), P.rows(), out, P * z);
  return out;
}

std::optional<Vec> AdamsSS::dr_representative(const Vec& x, int s, int t, int r) const {
  if (s + r >= length()) throw Error("d_" + std::to_string(r) + " from s=" + std::to_string(s) + " needs a longer resolution");
  const int n = mod2(t - s);
  auto z = solve_affine(i_chain(s + r, s + 1, n - 1), delta_star(s, n) * x);
  if (!z) return std::nullopt;
  return p_star(s + r, n - 1) * z->representative;
}

int AdamsSS::survives_to(const Vec& x, int s, int t, int r_max) const {
  int r = 1;
  while (r < r_max && in_range(r + 1, s) && in_span(Y_.p(), static_cast<int>(x.size()), cycles(r + 1, s, t), x)) ++r;
  return r;
}

const SSGroup& SSPage::at(int s, int t) const {
  const int n = mod2(t - s);
  for (const SSGroup& g : groups)
    if (g.s == s && g.t - g.s == n) return g;
  throw Error("E_" + std::to_string(r) + " has no group at s=" + std::to_string(s));
}

std::optional<FpMatrix> SSPage::differential(int s, int t) const {
  auto it = d.find({s, mod2(t - s)});
  if (it == d.end()) return std::nullopt;
  return it->second;
}

SSPage page(const AdamsSS& ss, int r) {
  SSPage pg;
  pg.r = r;
  const int p = ss.target().p();
  for (int s = 0; ss.in_range(r, s); ++s)
    for (int n = 0; n < 2; ++n) {
      SSGroup g(s, s + n, ss.E1(s, s + n));
      g.cycles = ss.cycles(r, s, g.t);
      g.boundaries = ss.boundaries(r, s, g.t);
      std::vector<Vec> span = g.boundaries;
      for (const Vec& z : g.cycles)
        if (!in_span(p, g.E1.dim(), span, z)) {
          span.push_back(z);
          g.reps.push_back(z);
        }
      pg.groups.push_back(std::move(g));
    }
  for (const SSGroup& g : pg.groups) {
    if (!ss.in_range(r, g.s + r)) continue;
    const SSGroup& h = pg.at(g.s + r, g.t + r - 1);
    std::vector<Vec> basis = h.reps;
    basis.insert(basis.end(), h.boundaries.begin(), h.boundaries.end());
    FpMatrix B = FpMatrix::from_columns(p, h.E1.dim(), basis);
    FpMatrix D(p, h.dim(), g.dim());
    for (int c = 0; c < g.dim(); ++c) {
      auto img = ss.dr_representative(g.reps[static_cast<std::size_t>(c)], g.s, g.t, r);
      if (!img) throw Error("internal: E_r class without a d_r image");
      auto coords = solve_affine(B, *img);
      if (!coords) throw Error("internal: d_r image outside the cycles of the target");
      for (int k = 0; k < h.dim(); ++k) D.set(k, c, coords->representative[static_cast<std::size_t>(k)]);
    }
    pg.d.emplace(std::make_pair(g.s, g.t - g.s), std::move(D));
  }
  return pg;
}

std::vector<SSPage> pages(const AdamsResolution& res, const RModule& Y, int r_max) {
  if (r_max < 1) throw Error("r_max must be at least 1");
  if (res.length() < r_max + 1)
    throw Error("resolution of length " + std::to_string(res.length()) + " is too short for E_" + std::to_string(r_max));
  AdamsSS ss(res, Y);
  std::vector<SSPage> out;
  for (int r = 1; r <= r_max; ++r) out.push_back(page(ss, r));
  return out;
}

namespace {

void check_class(const AdamsSS& ss, const StableMap& x, int s, int t) {
  StableHomSpace H = ss.E1(s, t);
  if (!(x.src() == H.src()) || !(x.tgt() == H.tgt()))
    throw DimensionMismatch("class is not a map Σ^{t-s}P_s → Y for s=" + std::to_string(s) + ", t=" + std::to_string(t));
}

}  // namespace

BracketSet dr_set(const AdamsSS& ss, const StableMap& x, int s, int t, int r, std::uint64_t cap) {
  check_class(ss, x, s, t);
  if (r < 1) throw Error("r must be at least 1");
  if (s + r >= ss.length())
    throw Error("d_" + std::to_string(r) + " from s=" + std::to_string(s) + " needs a longer resolution");
  const int reached = ss.survives_to(x.coords(), s, t, r);
  if (reached < r)
    throw Error("class does not survive to E_" + std::to_string(r) + ": d_" + std::to_string(reached) + " is nonzero");
  StableHomSpace amb = ss.E1(s + r, t + r - 1);
  BracketSet out(amb);
  out.definition = "d_" + std::to_string(r);
  auto rep = ss.dr_representative(x.coords(), s, t, r);
  if (!rep) throw Error("internal: surviving class without a d_r image");
  AffineSpace coset{amb.p(), *rep, ss.boundaries(r, s + r, t + r - 1)};
  out.enumerated = checked_count(amb.p(), coset.dim(), cap);
  out.elements = enumerate_points(coset, cap);
  out.indeterminacy_basis = coset.basis;
  out.normalize();
  return out;
}

namespace {

// A set of stable maps computed in the opposite category, moved to E_1 by Σ^n.
BracketSet transported(const BracketSet& in, const StableHomSpace& amb, int n) {
  BracketSet out(amb);
  out.definition = in.definition;
  out.jseq = in.jseq;
  out.enumerated = in.enumerated;
  out.empty_reason = in.empty_reason;
  if (in.indeterminacy_basis) {
    std::vector<Vec> basis;
    for (const Vec& v : *in.indeterminacy_basis) basis.push_back(sh(in.ambient.element(v), n).coords());
    out.indeterminacy_basis = basis;
  }
  for (const StableMap& e : in.maps()) {
    StableMap m = sh(e, n);
    if (!(m.src() == amb.src()) || !(m.tgt() == amb.tgt())) throw Error("internal: transported set leaves E_1");
    out.insert(m.coords());
  }
  out.normalize();
  return out;
}

BracketSet composed_right(const BracketSet& s, const StableMap& f, const StableHomSpace& amb) {
  BracketSet out(amb);
  out.definition = s.definition;
  out.empty_reason = s.empty_reason;
  for (const StableMap& e : s.maps()) {
    StableMap m = e * f;
    if (!(m.src() == amb.src()) || !(m.tgt() == amb.tgt())) throw Error("internal: composite leaves E_1");
    out.insert(m.coords());
  }
  out.normalize();
  return out;
}

bool proper_subset(const BracketSet& a, const BracketSet& b) { return is_subset(a, b) && a.size() < b.size(); }

}  // namespace

bool DrFormsReport::all_equal() const {
  return full_equal && restricted_equal && filtered_equal && (r != 2 || composed_equal);
}

DrFormsReport dr_bracket_forms(const AdamsSS& ss, const StableMap& x, int s, int t, int r, std::uint64_t cap) {
  if (r < 2) throw Error("bracket forms need r >= 2");
  const AdamsResolution& res = ss.resolution();
  const int u = t - s;
  const auto at = [](int k) { return static_cast<std::size_t>(k); };
  DrFormsReport rep(r, s, t, dr_set(ss, x, s, t, r, cap));
  const StableHomSpace amb = ss.E1(s + r, t + r - 1);
  const int back = u + r - 1;

  const Cat op = Cat::direct().op();
  const StableMap xop = sh(x, u);
  const auto dop = [&](int k) { return shift(res.delta.at(at(k))); };
  const auto opd1 = [&](int k) { return op.compose(op.shift(res.p.at(at(k + 1))), dop(k)); };
  const StableMap dx = op.compose(dop(s), xop);

  std::vector<StableMap> maps;
  for (int k = r - 1; k >= 1; --k) maps.push_back(op.shift(opd1(s + k), k));
  maps.push_back(op.shift(res.p.at(at(s + 1))));
  maps.push_back(dx);
  rep.full = transported(higher_bracket(op, maps, {}, cap), amb, back);

  RestrictedBracketTrace tr{op, {}, op.shift(res.p.at(at(s + r)), r), {}};
  for (int k = 1; k <= r; ++k) {
    CTriangle b = res.op_triangle(s + k - 1);
    StableMap h = op.shift(b.h, k - 1);
    tr.triangles.push_back({op.shift(b.f, k - 1), op.shift(b.g, k - 1), (k - 1) % 2 ? -h : h});
  }
  rep.restricted = transported(restricted_higher_bracket(tr, xop, cap), amb, back);

  const OctahedronStage& last = tr.stages.back();
  for (const OctahedronStage& st : tr.stages) rep.W.push_back(st.W);
  BracketSet filt(op.hom(op.shift(op.src(xop), r - 1), op.tgt(tr.g)));
  filt.variance = Variance::Opposite;
  filt.definition = "filtered";
  StableMap bmap = -op.compose(tr.g, last.beta);
  StableMap target = op.shift(xop, r - 1);
  if (auto lifts = op.solve_lift(last.iota, target)) {
    StableHomSpace HA = op.hom(op.src(target), last.W);
    for (const Vec& c : enumerate_points(*lifts, cap)) filt.insert(op.compose(bmap, HA.element(c)).coords());
  } else {
    filt.empty_reason = "the class does not lift through σ_W";
  }
  filt.normalize();
  rep.filtered = transported(filt, amb, back);

  rep.full_equal = same_elements(rep.dr, rep.full);
  rep.restricted_equal = same_elements(rep.dr, rep.restricted);
  rep.filtered_equal = same_elements(rep.dr, rep.filtered);

  if (r == 2) {
    const StableMap pp = shift(res.p.at(at(s + 2)), 2);
    BracketSet in_op = bracket3(op, op.shift(dop(s + 1)), op.shift(res.p.at(at(s + 1))), dx, BracketDefn::FC, cap);
    BracketSet comp(StableHomSpace(pp.src(), in_op.ambient.tgt()));
    comp.definition = "composed";
    comp.empty_reason = in_op.empty_reason;
    for (const StableMap& e : in_op.maps()) comp.insert(op.compose(pp, e).coords());
    comp.normalize();
    rep.composed = transported(comp, amb, back);
    rep.composed_equal = same_elements(rep.dr, *rep.composed);

    const auto sign = [u](const BracketSet& b) { return mod2(u) ? negated(b) : b; };
    rep.inner = sign(bracket3(x, sh(res.d1(s), u - 1), sh(res.delta.at(at(s + 1)), u), BracketDefn::FC, cap));
    rep.middle = composed_right(*rep.inner, sh(res.p.at(at(s + 2)), u - 1), amb);
    rep.outer =
        transported(sign(bracket3(x, sh(res.d1(s), u - 1), sh(res.d1(s + 1), u), BracketDefn::FC, cap)), amb, 0);
    rep.chain_holds = is_subset(rep.dr, *rep.middle) && is_subset(*rep.middle, *rep.outer);
    rep.first_proper = proper_subset(rep.dr, *rep.middle);
    rep.second_proper = proper_subset(*rep.middle, *rep.outer);
  }
  return rep;
}

SparseReport sparse_check(const RModule& G, int N, int window) {
  if (N < 1) throw Error("N must be positive");
  ProjectiveClass cls = ghost_class(G);
  if (window < cls.period) throw Error("window must be at least the period " + std::to_string(cls.period));
  SparseReport rep;
  rep.N = N;
  rep.window = window;
  for (int d = -window; d <= window; ++d) {
    int dim = StableHomSpace(sh(cls.generator, d), cls.generator).dim();
    rep.dims.emplace_back(d, dim);
    if (dim == 0) continue;
    rep.nonzero_degrees.push_back(d);
    if (d % N != 0) rep.sparse = false;
  }
  return rep;
}

}  // namespace stm
