#include "stm/modrep.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace stm {

Ring::Ring(int p_, int m_) : p(p_), m(m_) {
  require_prime(p);
  if (m < 1) throw Error("truncation exponent must be at least 1, got " + std::to_string(m));
}

void require_same_ring(const RModule& a, const RModule& b) {
  if (!(a.ring() == b.ring()))
    throw ModulusMismatch("modules over different rings (p=" + std::to_string(a.p()) + ",m=" +
                          std::to_string(a.m()) + " vs p=" + std::to_string(b.p()) +
                          ",m=" + std::to_string(b.m()) + ")");
}

namespace {

std::optional<std::vector<int>> canonical_blocks(const FpMatrix& X) {
  const int n = X.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int v = X(r, c);
      if (r == c + 1) {
        if (v > 1) return std::nullopt;
      } else if (v != 0) {
        return std::nullopt;
      }
    }
  std::vector<int> sizes;
  int start = 0;
  for (int i = 0; i < n; ++i) {
    if (i + 1 == n || X(i + 1, i) == 0) {
      sizes.push_back(i + 1 - start);
      start = i + 1;
    }
  }
  return sizes;
}

// Incremental row echelon basis; add() reports whether the span grew.
class Echelon {
 public:
  explicit Echelon(int p) : p_(p) {}

  bool add(Vec v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      int c = v[piv_[i]];
      if (c == 0) continue;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = fp::sub(v[k], fp::mul(c, rows_[i][k], p_), p_);
    }
    auto it = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (it == v.end()) return false;
    int col = static_cast<int>(it - v.begin());
    int s = fp::inv(*it, p_);
    for (int& x : v) x = fp::mul(x, s, p_);
    for (Vec& r : rows_) {
      int c = r[col];
      if (c == 0) continue;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] = fp::sub(r[k], fp::mul(c, v[k], p_), p_);
    }
    rows_.push_back(std::move(v));
    piv_.push_back(col);
    return true;
  }

 private:
  int p_;
  std::vector<Vec> rows_;
  std::vector<int> piv_;
};

std::vector<int> offsets_of(const std::vector<int>& sizes) {
  std::vector<int> off;
  int o = 0;
  for (int s : sizes) {
    off.push_back(o);
    o += s;
  }
  return off;
}

JordanData compute_jordan(const FpMatrix& X, int m) {
  const int p = X.p(), n = X.rows();
  JordanData jd;
  if (auto blocks = canonical_blocks(X)) {
    jd.sizes = *blocks;
    jd.offsets = offsets_of(jd.sizes);
    jd.S = FpMatrix::identity(p, n);
    jd.Sinv = jd.S;
    jd.canonical = true;
    return jd;
  }
  std::vector<FpMatrix> pw{FpMatrix::identity(p, n)};
  for (int j = 1; j <= m + 1; ++j) pw.push_back(pw.back() * X);
  std::vector<std::vector<Vec>> ker(m + 2);
  for (int j = 0; j <= m + 1; ++j) ker[j] = kernel_basis(pw[j]);

  std::vector<std::pair<int, Vec>> tops;
  for (int j = m; j >= 1; --j) {
    Echelon span(p);
    for (const Vec& v : ker[j - 1]) span.add(v);
    for (const Vec& v : ker[j + 1]) span.add(X * v);
    for (const Vec& v : ker[j])
      if (span.add(v)) tops.emplace_back(j, v);
  }
  FpMatrix S(p, n, n);
  int col = 0;
  for (auto& [len, v] : tops) {
    Vec w = v;
    for (int k = 0; k < len; ++k) {
      for (int r = 0; r < n; ++r) S.set(r, col, w[r]);
      ++col;
      w = X * w;
    }
    jd.sizes.push_back(len);
  }
  if (col != n) throw Error("internal: Jordan chain basis incomplete");
  auto inv = inverse(S);
  if (!inv) throw Error("internal: Jordan chain basis singular");
  jd.offsets = offsets_of(jd.sizes);
  jd.S = std::move(S);
  jd.Sinv = std::move(*inv);
  return jd;
}

}  // namespace

RModule::RModule() : RModule(Ring(2, 1), FpMatrix(2, 0, 0)) {}

RModule::RModule(Ring ring, FpMatrix X) {
  if (X.p() != ring.p) throw ModulusMismatch("action matrix modulus differs from ring");
  if (X.rows() != X.cols()) throw DimensionMismatch("action matrix must be square");
  if (!power(X, ring.m).is_zero())
    throw Error("x^" + std::to_string(ring.m) + " does not act as zero");
  auto impl = std::make_shared<Impl>();
  impl->ring = ring;
  impl->jordan = compute_jordan(X, ring.m);
  impl->X = std::move(X);
  impl_ = std::move(impl);
}

bool RModule::same_as(const RModule& other) const {
  return impl_ == other.impl_ || (impl_->ring == other.impl_->ring && impl_->X == other.impl_->X);
}

RMap::RMap(RModule src, RModule tgt, FpMatrix A) : src_(std::move(src)), tgt_(std::move(tgt)), A_(std::move(A)) {
  require_same_ring(src_, tgt_);
  if (A_.p() != src_.p()) throw ModulusMismatch("map matrix modulus differs from ring");
  if (A_.rows() != tgt_.dim() || A_.cols() != src_.dim())
    throw DimensionMismatch("map matrix is " + std::to_string(A_.rows()) + "x" + std::to_string(A_.cols()) +
                            ", expected " + std::to_string(tgt_.dim()) + "x" + std::to_string(src_.dim()));
  if (!(A_ * src_.X() == tgt_.X() * A_)) throw Error("matrix does not commute with the action of x");
}

RModule module_from_partition(Ring ring, const std::vector<int>& parts) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::vector<int>>, RModule> cache;
  auto key = std::make_tuple(ring.p, ring.m, parts);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  int n = 0;
  for (int a : parts) {
    if (a < 1 || a > ring.m)
      throw Error("block size " + std::to_string(a) + " outside [1," + std::to_string(ring.m) + "]");
    n += a;
  }
  FpMatrix X(ring.p, n, n);
  int o = 0;
  for (int a : parts) {
    for (int k = 0; k + 1 < a; ++k) X.set(o + k + 1, o + k, 1);
    o += a;
  }
  RModule M(ring, std::move(X));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::move(key), M).first->second;
}

RModule zero_module(Ring ring) { return RModule(ring, FpMatrix(ring.p, 0, 0)); }

RModule direct_sum(const RModule& a, const RModule& b) {
  require_same_ring(a, b);
  return RModule(a.ring(), block_diag(a.X(), b.X()));
}

RModule direct_sum(const std::vector<RModule>& parts, Ring ring) {
  FpMatrix X(ring.p, 0, 0);
  for (const RModule& M : parts) {
    if (!(M.ring() == ring)) throw ModulusMismatch("direct sum over different rings");
    X = block_diag(X, M.X());
  }
  return RModule(ring, std::move(X));
}

std::vector<int> jordan_type(const RModule& M) {
  std::vector<int> t = M.block_sizes();
  std::sort(t.begin(), t.end(), std::greater<>());
  return t;
}

bool is_projective(const RModule& M) {
  for (int a : M.block_sizes())
    if (a != M.m()) return false;
  return true;
}

RMap identity_map(const RModule& M) { return RMap(M, M, FpMatrix::identity(M.p(), M.dim())); }

RMap zero_map(const RModule& M, const RModule& N) { return RMap(M, N, FpMatrix(M.p(), N.dim(), M.dim())); }

RMap compose(const RMap& g, const RMap& f) {
  if (!(f.tgt() == g.src())) throw DimensionMismatch("maps are not composable");
  return RMap(f.src(), g.tgt(), g.A() * f.A());
}

static void same_shape(const RMap& a, const RMap& b) {
  if (!(a.src() == b.src()) || !(a.tgt() == b.tgt())) throw DimensionMismatch("maps have different source or target");
}

RMap operator+(const RMap& a, const RMap& b) {
  same_shape(a, b);
  return RMap(a.src(), a.tgt(), a.A() + b.A());
}

RMap operator-(const RMap& a, const RMap& b) {
  same_shape(a, b);
  return RMap(a.src(), a.tgt(), a.A() - b.A());
}

RMap operator-(const RMap& a) { return RMap(a.src(), a.tgt(), -a.A()); }

RMap scale(const RMap& a, long long s) { return RMap(a.src(), a.tgt(), a.A().scaled(s)); }

RMap hcat(const RMap& a, const RMap& b) {
  if (!(a.tgt() == b.tgt())) throw DimensionMismatch("hcat targets differ");
  return RMap(direct_sum(a.src(), b.src()), a.tgt(), hstack(a.A(), b.A()));
}

RMap vcat(const RMap& a, const RMap& b) {
  if (!(a.src() == b.src())) throw DimensionMismatch("vcat sources differ");
  return RMap(a.src(), direct_sum(a.tgt(), b.tgt()), vstack(a.A(), b.A()));
}

RMap direct_sum_map(const RMap& a, const RMap& b) {
  return RMap(direct_sum(a.src(), b.src()), direct_sum(a.tgt(), b.tgt()), block_diag(a.A(), b.A()));
}

RMap inclusion_first(const RModule& a, const RModule& b) {
  FpMatrix A(a.p(), a.dim() + b.dim(), a.dim());
  A.set_block(0, 0, FpMatrix::identity(a.p(), a.dim()));
  return RMap(a, direct_sum(a, b), std::move(A));
}

RMap inclusion_second(const RModule& a, const RModule& b) {
  FpMatrix A(a.p(), a.dim() + b.dim(), b.dim());
  A.set_block(a.dim(), 0, FpMatrix::identity(a.p(), b.dim()));
  return RMap(b, direct_sum(a, b), std::move(A));
}

RMap projection_first(const RModule& a, const RModule& b) {
  FpMatrix A(a.p(), a.dim(), a.dim() + b.dim());
  A.set_block(0, 0, FpMatrix::identity(a.p(), a.dim()));
  return RMap(direct_sum(a, b), a, std::move(A));
}

RMap projection_second(const RModule& a, const RModule& b) {
  FpMatrix A(a.p(), b.dim(), a.dim() + b.dim());
  A.set_block(0, a.dim(), FpMatrix::identity(a.p(), b.dim()));
  return RMap(direct_sum(a, b), b, std::move(A));
}

RMap mu(const RModule& src, const RModule& tgt, int j) {
  if (src.num_blocks() != 1 || tgt.num_blocks() != 1 || !src.is_canonical() || !tgt.is_canonical())
    throw Error("mu is defined between cyclic canonical modules");
  Vec poly(tgt.dim(), 0);
  if (j < 0) throw Error("negative exponent in mu");
  if (j < tgt.dim()) poly[j] = 1;
  return map_from_blocks(src, tgt, {{poly}});
}

RMap map_from_blocks(const RModule& src, const RModule& tgt, const std::vector<std::vector<Vec>>& polys) {
  require_same_ring(src, tgt);
  const int p = src.p();
  const JordanData& js = src.jordan();
  const JordanData& jt = tgt.jordan();
  if (static_cast<int>(polys.size()) != tgt.num_blocks())
    throw DimensionMismatch("expected " + std::to_string(tgt.num_blocks()) + " block rows, got " +
                            std::to_string(polys.size()));
  FpMatrix B(p, tgt.dim(), src.dim());
  for (int t = 0; t < tgt.num_blocks(); ++t) {
    if (static_cast<int>(polys[t].size()) != src.num_blocks())
      throw DimensionMismatch("expected " + std::to_string(src.num_blocks()) + " block columns, got " +
                              std::to_string(polys[t].size()));
    const int b = jt.sizes[t];
    for (int s = 0; s < src.num_blocks(); ++s) {
      const int a = js.sizes[s];
      const Vec& c = polys[t][s];
      for (int j = 0; j < static_cast<int>(c.size()); ++j) {
        int cj = fp::reduce(c[j], p);
        if (cj == 0 || j >= b) continue;
        if (j < b - a)
          throw Error("x^" + std::to_string(j) + " does not give a map R/x^" + std::to_string(a) + " -> R/x^" +
                      std::to_string(b));
        for (int i = 0; i + j < b && i < a; ++i)
          B.set(jt.offsets[t] + i + j, js.offsets[s] + i, B(jt.offsets[t] + i + j, js.offsets[s] + i) + cj);
      }
    }
  }
  return RMap(src, tgt, jt.S * B * js.Sinv);
}

std::vector<std::vector<Vec>> block_polys(const RMap& f) {
  const JordanData& js = f.src().jordan();
  const JordanData& jt = f.tgt().jordan();
  FpMatrix B = jt.Sinv * f.A() * js.S;
  std::vector<std::vector<Vec>> out(jt.sizes.size(), std::vector<Vec>(js.sizes.size()));
  for (std::size_t t = 0; t < jt.sizes.size(); ++t)
    for (std::size_t s = 0; s < js.sizes.size(); ++s) {
      Vec c(jt.sizes[t]);
      for (int j = 0; j < jt.sizes[t]; ++j) c[j] = B(jt.offsets[t] + j, js.offsets[s]);
      out[t][s] = std::move(c);
    }
  return out;
}

std::vector<RMap> hom_basis(const RModule& M, const RModule& N) {
  require_same_ring(M, N);
  std::vector<RMap> out;
  const int ns = M.num_blocks(), nt = N.num_blocks();
  for (int s = 0; s < ns; ++s)
    for (int t = 0; t < nt; ++t) {
      const int a = M.block_sizes()[s], b = N.block_sizes()[t];
      for (int j = std::max(0, b - a); j < b; ++j) {
        std::vector<std::vector<Vec>> polys(nt, std::vector<Vec>(ns));
        polys[t][s] = Vec(b, 0);
        polys[t][s][j] = 1;
        out.push_back(map_from_blocks(M, N, polys));
      }
    }
  return out;
}

static RModule free_module(Ring ring, int rank) { return module_from_partition(ring, std::vector<int>(rank, ring.m)); }

Cover projective_cover(const RModule& M) {
  const int m = M.m(), r = M.num_blocks();
  RModule P = free_module(M.ring(), r);
  const JordanData& jd = M.jordan();
  FpMatrix Q(M.p(), M.dim(), P.dim());
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < jd.sizes[i]; ++k) Q.set(jd.offsets[i] + k, i * m + k, 1);
  return {P, RMap(P, M, jd.S * Q)};
}

Envelope injective_envelope(const RModule& M) {
  const int m = M.m(), r = M.num_blocks();
  RModule I = free_module(M.ring(), r);
  const JordanData& jd = M.jordan();
  FpMatrix E(M.p(), I.dim(), M.dim());
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < jd.sizes[i]; ++k) E.set(i * m + m - jd.sizes[i] + k, jd.offsets[i] + k, 1);
  return {I, RMap(M, I, E * jd.Sinv)};
}

static std::vector<int> complement_parts(const RModule& M) {
  std::vector<int> parts;
  for (int a : M.block_sizes())
    if (a < M.m()) parts.push_back(M.m() - a);
  return parts;
}

Syzygy omega(const RModule& M) {
  const int m = M.m();
  Cover cov = projective_cover(M);
  RModule K = module_from_partition(M.ring(), complement_parts(M));
  FpMatrix A(M.p(), cov.P.dim(), K.dim());
  int t = 0;
  for (int i = 0; i < M.num_blocks(); ++i) {
    const int a = M.block_sizes()[i];
    if (a == m) continue;
    const int off = K.jordan().offsets[t++];
    for (int k = 0; k < m - a; ++k) A.set(i * m + a + k, off + k, 1);
  }
  RMap incl(K, cov.P, std::move(A));
  return {K, incl, cov};
}

Cosyzygy sigma(const RModule& M) {
  const int m = M.m();
  Envelope env = injective_envelope(M);
  RModule C = module_from_partition(M.ring(), complement_parts(M));
  FpMatrix A(M.p(), C.dim(), env.I.dim());
  int t = 0;
  for (int i = 0; i < M.num_blocks(); ++i) {
    const int a = M.block_sizes()[i];
    if (a == m) continue;
    const int off = C.jordan().offsets[t++];
    for (int k = 0; k < m - a; ++k) A.set(off + k, i * m + k, 1);
  }
  RMap proj(env.I, C, std::move(A));
  return {C, proj, env};
}

RModule nonprojective_part(const RModule& M) {
  std::vector<int> parts;
  for (int a : M.block_sizes())
    if (a < M.m()) parts.push_back(a);
  return module_from_partition(M.ring(), parts);
}

static FpMatrix nonprojective_projection(const RModule& M, const RModule& J) {
  FpMatrix P(M.p(), J.dim(), M.dim());
  int t = 0;
  for (int i = 0; i < M.num_blocks(); ++i) {
    const int a = M.block_sizes()[i];
    if (a == M.m()) continue;
    const int off = J.jordan().offsets[t++];
    for (int k = 0; k < a; ++k) P.set(off + k, M.jordan().offsets[i] + k, 1);
  }
  return P;
}

RMap to_canonical(const RModule& M) {
  RModule J = nonprojective_part(M);
  return RMap(M, J, nonprojective_projection(M, J) * M.jordan().Sinv);
}

RMap from_canonical(const RModule& M) {
  RModule J = nonprojective_part(M);
  return RMap(J, M, M.jordan().S * nonprojective_projection(M, J).transpose());
}

SubmoduleData kernel(const RMap& f) {
  const int p = f.p(), n = f.src().dim();
  Rref rr = rref(f.A());
  std::vector<Vec> basis = kernel_basis(f.A());
  std::vector<int> is_pivot(n, 0), free;
  for (int c : rr.pivots) is_pivot[c] = 1;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  FpMatrix K = FpMatrix::from_columns(p, n, basis);
  FpMatrix XK = f.src().X() * K;
  const int d = static_cast<int>(basis.size());
  FpMatrix Xk(p, d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) Xk.set(r, c, XK(free[r], c));
  RModule sub(f.src().ring(), std::move(Xk));
  return {sub, RMap(sub, f.src(), std::move(K))};
}

QuotientData cokernel(const RMap& f) {
  const int p = f.p(), n = f.tgt().dim();
  std::vector<Vec> image;
  for (int c = 0; c < f.A().cols(); ++c) image.push_back(f.A().column(c));
  QuotientMap q(p, n, image);
  const int d = q.quotient_dim();
  FpMatrix proj(p, d, n), section(p, n, d), Xq(p, d, d);
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    Vec c = q.coords(e);
    for (int r = 0; r < d; ++r) proj.set(r, i, c[r]);
  }
  for (int r = 0; r < d; ++r) {
    const int col = q.complement_columns()[r];
    section.set(col, r, 1);
    Vec c = q.coords(f.tgt().X().column(col));
    for (int k = 0; k < d; ++k) Xq.set(k, r, c[k]);
  }
  RModule quot(f.tgt().ring(), std::move(Xq));
  return {quot, RMap(f.tgt(), quot, std::move(proj)), std::move(section)};
}

namespace {

std::optional<RMap> solve_linear_in_hom(const RModule& src, const RModule& tgt, const std::vector<FpMatrix>& images,
                                        const FpMatrix& rhs) {
  const std::vector<RMap> basis = hom_basis(src, tgt);
  const int p = src.p();
  const int len = rhs.rows() * rhs.cols();
  FpMatrix sys(p, len, static_cast<int>(basis.size()));
  for (std::size_t i = 0; i < images.size(); ++i)
    for (int k = 0; k < len; ++k) sys.set(k, static_cast<int>(i), images[i].data()[k]);
  auto sol = solve_affine(sys, rhs.data());
  if (!sol) return std::nullopt;
  FpMatrix A(p, tgt.dim(), src.dim());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (sol->representative[i] != 0) A = A + basis[i].A().scaled(sol->representative[i]);
  return RMap(src, tgt, std::move(A));
}

}  // namespace

std::optional<RMap> extend_along(const RMap& a, const RMap& b) {
  if (!(a.src() == b.src())) throw DimensionMismatch("extend_along: sources differ");
  const RModule& src = a.tgt();
  const RModule& tgt = b.tgt();
  std::vector<FpMatrix> images;
  for (const RMap& h : hom_basis(src, tgt)) images.push_back(h.A() * a.A());
  return solve_linear_in_hom(src, tgt, images, b.A());
}

std::optional<RMap> lift_along(const RMap& a, const RMap& b) {
  if (!(a.tgt() == b.tgt())) throw DimensionMismatch("lift_along: targets differ");
  const RModule& src = b.src();
  const RModule& tgt = a.src();
  std::vector<FpMatrix> images;
  for (const RMap& h : hom_basis(src, tgt)) images.push_back(a.A() * h.A());
  return solve_linear_in_hom(src, tgt, images, b.A());
}

std::optional<RMap> find_isomorphism(const RModule& M, const RModule& N) {
  require_same_ring(M, N);
  if (jordan_type(M) != jordan_type(N)) return std::nullopt;
  const JordanData& jm = M.jordan();
  const JordanData& jn = N.jordan();
  std::vector<int> used(jn.sizes.size(), 0);
  FpMatrix B(M.p(), N.dim(), M.dim());
  for (std::size_t s = 0; s < jm.sizes.size(); ++s) {
    std::size_t t = 0;
    while (used[t] || jn.sizes[t] != jm.sizes[s]) ++t;
    used[t] = 1;
    for (int k = 0; k < jm.sizes[s]; ++k) B.set(jn.offsets[t] + k, jm.offsets[s] + k, 1);
  }
  return RMap(M, N, jn.S * B * jm.Sinv);
}

std::string partition_string(const std::vector<int>& parts) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << ']';
  return os.str();
}

}  // namespace stm
