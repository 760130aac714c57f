#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stm {

using Vec = std::vector<int>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ModulusMismatch : public Error {
 public:
  using Error::Error;
};

class EnumerationOverflow : public Error {
 public:
  EnumerationOverflow(std::uint64_t requested, std::uint64_t cap);
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

bool is_prime(int p);
void require_prime(int p);

namespace fp {
inline int reduce(long long v, int p) {
  long long r = v % p;
  return static_cast<int>(r < 0 ? r + p : r);
}
inline int add(int a, int b, int p) { return (a + b) % p; }
inline int sub(int a, int b, int p) { return (a - b + p) % p; }
inline int neg(int a, int p) { return a == 0 ? 0 : p - a; }
inline int mul(int a, int b, int p) {
  return static_cast<int>((static_cast<long long>(a) * b) % p);
}
int inv(int a, int p);
}  // namespace fp

// Dense matrix over F_p, row-major, entries kept in [0, p).
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int p, int rows, int cols);
  FpMatrix(int p, int rows, int cols, const std::vector<long long>& entries);

  static FpMatrix identity(int p, int n);
  static FpMatrix from_rows(int p, const std::vector<std::vector<long long>>& rows);
  static FpMatrix from_columns(int p, int rows, const std::vector<Vec>& cols);

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  int operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  void set(int r, int c, long long v) {
    data_[static_cast<std::size_t>(r) * cols_ + c] = fp::reduce(v, p_);
  }
  const std::vector<int>& data() const { return data_; }

  bool is_zero() const;
  Vec row(int r) const;
  Vec column(int c) const;
  FpMatrix transpose() const;
  FpMatrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const FpMatrix& m);
  FpMatrix scaled(long long s) const;

  friend bool operator==(const FpMatrix& a, const FpMatrix& b) = default;

 private:
  int p_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> data_;
};

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
FpMatrix operator+(const FpMatrix& a, const FpMatrix& b);
FpMatrix operator-(const FpMatrix& a, const FpMatrix& b);
FpMatrix operator-(const FpMatrix& a);
Vec operator*(const FpMatrix& a, const Vec& v);

FpMatrix hstack(const FpMatrix& a, const FpMatrix& b);
FpMatrix vstack(const FpMatrix& a, const FpMatrix& b);
FpMatrix block_diag(const FpMatrix& a, const FpMatrix& b);
FpMatrix power(const FpMatrix& a, int e);

struct Rref {
  FpMatrix reduced;
  std::vector<int> pivots;  // pivot column of each nonzero row
  int rank() const { return static_cast<int>(pivots.size()); }
};

// Pivot is the leftmost nonzero column, topmost available row; pivots are normalised to 1.
Rref rref(const FpMatrix& a);
int rank(const FpMatrix& a);
// Kernel basis, one vector per free column in increasing order, free entry = 1.
std::vector<Vec> kernel_basis(const FpMatrix& a);
std::optional<FpMatrix> inverse(const FpMatrix& a);

struct AffineSpace {
  int p = 2;
  Vec representative;
  std::vector<Vec> basis;

  int ambient_dim() const { return static_cast<int>(representative.size()); }
  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(const Vec& v) const;
};

// Solutions of a x = b, or nullopt when inconsistent. Free variables of the
// representative are 0.
std::optional<AffineSpace> solve_affine(const FpMatrix& a, const Vec& b);

// Coordinates of v modulo span(basis) with respect to the complement spanned by
// the standard vectors at the non-pivot columns of rref(basis).
class QuotientMap {
 public:
  QuotientMap(int p, int ambient_dim, const std::vector<Vec>& basis);

  int p() const { return p_; }
  int ambient_dim() const { return n_; }
  int subspace_dim() const { return static_cast<int>(pivots_.size()); }
  int quotient_dim() const { return static_cast<int>(free_.size()); }
  const std::vector<int>& complement_columns() const { return free_; }

  Vec reduce(const Vec& v) const;  // ambient representative with zero pivot entries
  Vec coords(const Vec& v) const;
  Vec lift(const Vec& coords) const;
  bool contains(const Vec& v) const;

 private:
  int p_;
  int n_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
  std::vector<int> free_;
};

Vec quotient_coords(int p, const std::vector<Vec>& subspace_basis, const Vec& v);

std::uint64_t checked_count(int p, int dim, std::uint64_t cap);
// All points rep + sum c_i basis_i, coefficient tuples in lexicographic order.
std::vector<Vec> enumerate_points(const AffineSpace& space, std::uint64_t cap);

Vec vec_add(const Vec& a, const Vec& b, int p);
Vec vec_sub(const Vec& a, const Vec& b, int p);
Vec vec_scale(const Vec& a, long long s, int p);
bool vec_is_zero(const Vec& a);

}  // namespace stm
