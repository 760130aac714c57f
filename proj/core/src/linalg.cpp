#include "stm/linalg.hpp"

#include <limits>
#include <utility>

namespace stm {

EnumerationOverflow::EnumerationOverflow(std::uint64_t requested, std::uint64_t cap)
    : Error("enumeration of " + (requested == std::numeric_limits<std::uint64_t>::max()
                                     ? std::string("more than 2^64")
                                     : std::to_string(requested)) +
            " points exceeds cap " + std::to_string(cap)),
      requested_(requested),
      cap_(cap) {}

bool is_prime(int p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

void require_prime(int p) {
  if (p > 46340 || !is_prime(p))
    throw Error("modulus " + std::to_string(p) + " is not a supported prime");
}

int fp::inv(int a, int p) {
  if (a % p == 0) throw Error("inverse of zero mod " + std::to_string(p));
  long long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long long q = r / nr;
    t = std::exchange(nt, t - q * nt);
    r = std::exchange(nr, r - q * nr);
  }
  return reduce(t, p);
}

FpMatrix::FpMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols) {
  require_prime(p);
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

FpMatrix::FpMatrix(int p, int rows, int cols, const std::vector<long long>& entries)
    : FpMatrix(p, rows, cols) {
  if (entries.size() != data_.size())
    throw DimensionMismatch("expected " + std::to_string(data_.size()) + " entries, got " +
                            std::to_string(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) data_[i] = fp::reduce(entries[i], p);
}

FpMatrix FpMatrix::identity(int p, int n) {
  FpMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.data_[static_cast<std::size_t>(i) * n + i] = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<long long>>& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
  FpMatrix m(p, nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) throw DimensionMismatch("ragged matrix rows");
    for (int c = 0; c < nc; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

FpMatrix FpMatrix::from_columns(int p, int rows, const std::vector<Vec>& cols) {
  FpMatrix m(p, rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols_; ++c) {
    if (static_cast<int>(cols[c].size()) != rows) throw DimensionMismatch("column length");
    for (int r = 0; r < rows; ++r) m.set(r, c, cols[c][r]);
  }
  return m;
}

bool FpMatrix::is_zero() const {
  for (int v : data_)
    if (v != 0) return false;
  return true;
}

Vec FpMatrix::row(int r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r) * cols_,
             data_.begin() + static_cast<std::ptrdiff_t>(r + 1) * cols_);
}

Vec FpMatrix::column(int c) const {
  Vec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.data_[static_cast<std::size_t>(c) * rows_ + r] = (*this)(r, c);
  return t;
}

FpMatrix FpMatrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
    throw DimensionMismatch("block out of range");
  FpMatrix b(p_, nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) b.data_[static_cast<std::size_t>(r) * nc + c] = (*this)(r0 + r, c0 + c);
  return b;
}

void FpMatrix::set_block(int r0, int c0, const FpMatrix& m) {
  if (m.p_ != p_) throw ModulusMismatch("set_block modulus");
  if (r0 < 0 || c0 < 0 || r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_)
    throw DimensionMismatch("block out of range");
  for (int r = 0; r < m.rows_; ++r)
    for (int c = 0; c < m.cols_; ++c)
      data_[static_cast<std::size_t>(r0 + r) * cols_ + c0 + c] = m(r, c);
}

FpMatrix FpMatrix::scaled(long long s) const {
  FpMatrix m = *this;
  int k = fp::reduce(s, p_);
  for (int& v : m.data_) v = fp::mul(v, k, p_);
  return m;
}

static void same_modulus(const FpMatrix& a, const FpMatrix& b) {
  if (a.p() != b.p())
    throw ModulusMismatch("moduli " + std::to_string(a.p()) + " and " + std::to_string(b.p()));
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  if (a.cols() != b.rows())
    throw DimensionMismatch("product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  const int p = a.p(), n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<long long> acc(static_cast<std::size_t>(n) * m, 0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      int x = a(i, l);
      if (x == 0) continue;
      long long* row = acc.data() + static_cast<std::size_t>(i) * m;
      for (int j = 0; j < m; ++j) row[j] += static_cast<long long>(x) * b(l, j);
    }
  return FpMatrix(p, n, m, acc);
}

FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("sum shapes differ");
  FpMatrix c(a.p(), a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) c.set(r, k, a(r, k) + b(r, k));
  return c;
}

FpMatrix operator-(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("difference shapes differ");
  FpMatrix c(a.p(), a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) c.set(r, k, a(r, k) - b(r, k));
  return c;
}

FpMatrix operator-(const FpMatrix& a) { return a.scaled(-1); }

Vec operator*(const FpMatrix& a, const Vec& v) {
  if (static_cast<int>(v.size()) != a.cols()) throw DimensionMismatch("matrix-vector shapes differ");
  Vec out(a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    long long s = 0;
    for (int c = 0; c < a.cols(); ++c) s += static_cast<long long>(a(r, c)) * v[c];
    out[r] = fp::reduce(s, a.p());
  }
  return out;
}

FpMatrix hstack(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row counts differ");
  FpMatrix m(a.p(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

FpMatrix vstack(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack column counts differ");
  FpMatrix m(a.p(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

FpMatrix block_diag(const FpMatrix& a, const FpMatrix& b) {
  same_modulus(a, b);
  FpMatrix m(a.p(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

FpMatrix power(const FpMatrix& a, int e) {
  if (a.rows() != a.cols()) throw DimensionMismatch("power of non-square matrix");
  FpMatrix r = FpMatrix::identity(a.p(), a.rows());
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

Rref rref(const FpMatrix& a) {
  const int p = a.p(), nr = a.rows(), nc = a.cols();
  std::vector<Vec> m(nr);
  for (int r = 0; r < nr; ++r) m[r] = a.row(r);
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < nc && row < nr; ++c) {
    int sel = -1;
    for (int r = row; r < nr; ++r)
      if (m[r][c] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    int s = fp::inv(m[row][c], p);
    for (int k = c; k < nc; ++k) m[row][k] = fp::mul(m[row][k], s, p);
    for (int r = 0; r < nr; ++r) {
      if (r == row || m[r][c] == 0) continue;
      int f = m[r][c];
      for (int k = c; k < nc; ++k) m[r][k] = fp::sub(m[r][k], fp::mul(f, m[row][k], p), p);
    }
    pivots.push_back(c);
    ++row;
  }
  FpMatrix red(p, nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) red.set(r, c, m[r][c]);
  return {std::move(red), std::move(pivots)};
}

int rank(const FpMatrix& a) { return rref(a).rank(); }

static std::vector<int> free_columns(int n, const std::vector<int>& pivots) {
  std::vector<int> is_pivot(n, 0), out;
  for (int c : pivots) is_pivot[c] = 1;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) out.push_back(c);
  return out;
}

std::vector<Vec> kernel_basis(const FpMatrix& a) {
  const int p = a.p(), n = a.cols();
  Rref rr = rref(a);
  std::vector<Vec> basis;
  for (int f : free_columns(n, rr.pivots)) {
    Vec v(n, 0);
    v[f] = 1;
    for (int i = 0; i < rr.rank(); ++i) v[rr.pivots[i]] = fp::neg(rr.reduced(i, f), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<FpMatrix> inverse(const FpMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
  int n = a.rows();
  Rref rr = rref(hstack(a, FpMatrix::identity(a.p(), n)));
  if (rr.rank() < n || (n > 0 && rr.pivots[n - 1] != n - 1)) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

bool AffineSpace::contains(const Vec& v) const {
  if (v.size() != representative.size()) return false;
  QuotientMap q(p, ambient_dim(), basis);
  return q.contains(vec_sub(v, representative, p));
}

std::optional<AffineSpace> solve_affine(const FpMatrix& a, const Vec& b) {
  if (static_cast<int>(b.size()) != a.rows())
    throw DimensionMismatch("right-hand side has length " + std::to_string(b.size()) + ", expected " +
                            std::to_string(a.rows()));
  const int p = a.p(), n = a.cols();
  FpMatrix bcol(p, a.rows(), 1);
  for (int r = 0; r < a.rows(); ++r) bcol.set(r, 0, b[r]);
  Rref rr = rref(hstack(a, bcol));
  if (rr.rank() > 0 && rr.pivots.back() == n) return std::nullopt;
  AffineSpace s;
  s.p = p;
  s.representative.assign(n, 0);
  for (int i = 0; i < rr.rank(); ++i) s.representative[rr.pivots[i]] = rr.reduced(i, n);
  for (int f : free_columns(n, rr.pivots)) {
    Vec v(n, 0);
    v[f] = 1;
    for (int i = 0; i < rr.rank(); ++i) v[rr.pivots[i]] = fp::neg(rr.reduced(i, f), p);
    s.basis.push_back(std::move(v));
  }
  return s;
}

QuotientMap::QuotientMap(int p, int ambient_dim, const std::vector<Vec>& basis) : p_(p), n_(ambient_dim) {
  require_prime(p);
  FpMatrix m(p, static_cast<int>(basis.size()), n_);
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(basis[r].size()) != n_) throw DimensionMismatch("subspace vector length");
    for (int c = 0; c < n_; ++c) m.set(r, c, basis[r][c]);
  }
  Rref rr = rref(m);
  pivots_ = rr.pivots;
  for (int i = 0; i < rr.rank(); ++i) rows_.push_back(rr.reduced.row(i));
  free_ = free_columns(n_, pivots_);
}

Vec QuotientMap::reduce(const Vec& v) const {
  if (static_cast<int>(v.size()) != n_) throw DimensionMismatch("vector length");
  Vec w(n_);
  for (int i = 0; i < n_; ++i) w[i] = fp::reduce(v[i], p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int f = w[pivots_[i]];
    if (f == 0) continue;
    for (int c = 0; c < n_; ++c) w[c] = fp::sub(w[c], fp::mul(f, rows_[i][c], p_), p_);
  }
  return w;
}

Vec QuotientMap::coords(const Vec& v) const {
  Vec w = reduce(v), out;
  out.reserve(free_.size());
  for (int c : free_) out.push_back(w[c]);
  return out;
}

Vec QuotientMap::lift(const Vec& coords) const {
  if (coords.size() != free_.size()) throw DimensionMismatch("quotient coordinate length");
  Vec v(n_, 0);
  for (std::size_t i = 0; i < free_.size(); ++i) v[free_[i]] = fp::reduce(coords[i], p_);
  return v;
}

bool QuotientMap::contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

Vec quotient_coords(int p, const std::vector<Vec>& subspace_basis, const Vec& v) {
  return QuotientMap(p, static_cast<int>(v.size()), subspace_basis).coords(v);
}

std::uint64_t checked_count(int p, int dim, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int i = 0; i < dim; ++i) {
    if (count > cap / static_cast<std::uint64_t>(p)) {
      std::uint64_t total = count;
      for (int j = i; j < dim; ++j) {
        if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(p)) {
          total = std::numeric_limits<std::uint64_t>::max();
          break;
        }
        total *= static_cast<std::uint64_t>(p);
      }
      throw EnumerationOverflow(total, cap);
    }
    count *= static_cast<std::uint64_t>(p);
  }
  return count;
}

std::vector<Vec> enumerate_points(const AffineSpace& space, std::uint64_t cap) {
  const int p = space.p, d = space.dim(), n = space.ambient_dim();
  std::uint64_t count = checked_count(p, d, cap);
  std::vector<Vec> out;
  out.reserve(count);
  Vec coeff(d, 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    Vec v = space.representative;
    for (int i = 0; i < d; ++i)
      if (coeff[i] != 0)
        for (int c = 0; c < n; ++c) v[c] = fp::add(v[c], fp::mul(coeff[i], space.basis[i][c], p), p);
    out.push_back(std::move(v));
    for (int i = d - 1; i >= 0; --i) {
      if (++coeff[i] < p) break;
      coeff[i] = 0;
    }
  }
  return out;
}

Vec vec_add(const Vec& a, const Vec& b, int p) {
  if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = fp::reduce(static_cast<long long>(a[i]) + b[i], p);
  return c;
}

Vec vec_sub(const Vec& a, const Vec& b, int p) {
  if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = fp::reduce(static_cast<long long>(a[i]) - b[i], p);
  return c;
}

Vec vec_scale(const Vec& a, long long s, int p) {
  Vec c(a.size());
  int k = fp::reduce(s, p);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = fp::mul(fp::reduce(a[i], p), k, p);
  return c;
}

bool vec_is_zero(const Vec& a) {
  for (int v : a)
    if (v != 0) return false;
  return true;
}

}  // namespace stm
