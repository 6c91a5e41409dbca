#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "wlsys/clodum.hpp"

namespace wlsys {

/// Dense vector over a clodum. Entries are validated against the carrier on
/// construction; element access is unchecked afterwards.
class WVector {
 public:
  WVector(Clodum clodum, std::vector<Scalar> data);
  WVector(Clodum clodum, std::initializer_list<Scalar> data)
      : WVector(clodum, std::vector<Scalar>(data)) {}

  static WVector filled(Clodum clodum, std::size_t n, Scalar value);
  static WVector bottoms(Clodum clodum, std::size_t n) { return filled(clodum, n, clodum.bottom()); }
  static WVector tops(Clodum clodum, std::size_t n) { return filled(clodum, n, clodum.top()); }
  // Impulse vector q_j: unit at j, bottom elsewhere.
  static WVector impulse(Clodum clodum, std::size_t n, std::size_t j);

  const Clodum& clodum() const { return clodum_; }
  std::size_t size() const { return data_.size(); }
  Scalar operator[](std::size_t i) const { return data_[i]; }
  Scalar& operator[](std::size_t i) { return data_[i]; }
  std::span<const Scalar> values() const { return data_; }
  const std::vector<Scalar>& data() const { return data_; }

  bool all_bottom() const;
  bool all_top() const;

  friend bool operator==(const WVector& a, const WVector& b) {
    return a.clodum_ == b.clodum_ && a.data_ == b.data_;
  }

 private:
  Clodum clodum_;
  std::vector<Scalar> data_;
};

/// Dense row-major matrix over a clodum.
class WMatrix {
 public:
  WMatrix(Clodum clodum, std::size_t rows, std::size_t cols, std::vector<Scalar> data);
  WMatrix(Clodum clodum, std::initializer_list<std::initializer_list<Scalar>> rows);

  static WMatrix filled(Clodum clodum, std::size_t rows, std::size_t cols, Scalar value);
  static WMatrix bottoms(Clodum clodum, std::size_t rows, std::size_t cols) {
    return filled(clodum, rows, cols, clodum.bottom());
  }
  static WMatrix tops(Clodum clodum, std::size_t rows, std::size_t cols) {
    return filled(clodum, rows, cols, clodum.top());
  }
  // Max-star identity: unit on the diagonal, bottom elsewhere.
  static WMatrix identity(Clodum clodum, std::size_t n);
  // Min-star' identity: dual unit on the diagonal, top elsewhere.
  static WMatrix dual_identity(Clodum clodum, std::size_t n);
  static WMatrix column_of(const WVector& v);
  static WMatrix row_of(const WVector& v);

  const Clodum& clodum() const { return clodum_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const Scalar> values() const { return data_; }

  WVector row(std::size_t i) const;
  WVector column(std::size_t j) const;
  WMatrix transpose() const;

  bool contains_top() const;
  bool contains_bottom() const;

  friend bool operator==(const WMatrix& a, const WMatrix& b) {
    return a.clodum_ == b.clodum_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Clodum clodum_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

// Max-star products: entry (i,j) = V_k a_ik * b_kj.
WMatrix maxmul(const WMatrix& a, const WMatrix& b);
WVector maxmul(const WMatrix& a, const WVector& x);
// Min-star' products: entry (i,j) = /\_k a_ik *' b_kj.
WMatrix minmul(const WMatrix& a, const WMatrix& b);
WVector minmul(const WMatrix& a, const WVector& x);

// Min-adjoint-erosion product: entry (i,j) = /\_k adj_erosion(a_ik, b_kj).
WMatrix min_adj_erosion_product(const WMatrix& a, const WMatrix& b);
WVector min_adj_erosion_product(const WMatrix& a, const WVector& x);
// Max-adjoint-dilation product: entry (i,j) = V_k adj_dilation(a_ik, b_kj).
WMatrix max_adj_dilation_product(const WMatrix& a, const WMatrix& b);
WVector max_adj_dilation_product(const WMatrix& a, const WVector& x);

// Conjugate transpose [conj(a_ji)]. Requires a self-conjugate clodum.
WMatrix adjoint_matrix(const WMatrix& a);

// delta_M(x) = M (max-star) x and its adjoint erosion
// eps_M(y)_j = /\_i adj_erosion(m_ij, y_i), so that
// delta_M(x) <= y  <=>  x <= eps_M(y).
WVector vec_dilation(const WMatrix& m, const WVector& x);
WVector vec_adjoint_erosion(const WMatrix& m, const WVector& y);
// eps'_M(y) = M (min-star') y and its adjoint dilation
// delta'_M(x)_j = V_i adj_dilation(m_ij, x_i).
WVector vec_erosion(const WMatrix& m, const WVector& y);
WVector vec_adjoint_dilation(const WMatrix& m, const WVector& x);

// t-fold max-star power; A^(0) is the identity.
WMatrix matrix_power(const WMatrix& a, int t);
// t-fold min-star' power; A'^(0) is the dual identity.
WMatrix dual_matrix_power(const WMatrix& a, int t);

// Elementwise lattice operations.
WMatrix join(const WMatrix& a, const WMatrix& b);
WMatrix meet(const WMatrix& a, const WMatrix& b);
WVector join(const WVector& a, const WVector& b);
WVector meet(const WVector& a, const WVector& b);

// Scalar V-translations a * x and a *' x.
WVector scale(Scalar a, const WVector& x);
WVector dual_scale(Scalar a, const WVector& x);
WMatrix scale(Scalar a, const WMatrix& m);

WVector conjugate(const WVector& x);

// Stack matrices side by side / on top of each other.
WMatrix hconcat(const std::vector<WMatrix>& blocks);
WMatrix vconcat(const std::vector<WMatrix>& blocks);

// Pointwise order and equality under the clodum tolerance.
bool leq(const WVector& a, const WVector& b);
bool leq(const WMatrix& a, const WMatrix& b);
bool approx_equal(const WVector& a, const WVector& b);
bool approx_equal(const WMatrix& a, const WMatrix& b);

}  // namespace wlsys
