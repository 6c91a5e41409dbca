#include "wlsys/matrix.hpp"

#include <string>

#include "wlsys/error.hpp"

namespace wlsys {

namespace {

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw DimensionError(std::string(what) + " must have at least one entry");
}

void require_inner(std::size_t lhs_cols, std::size_t rhs_rows, const char* op) {
  if (lhs_cols != rhs_rows) {
    throw DimensionError(std::string(op) + ": inner dimensions " + std::to_string(lhs_cols) +
                         " and " + std::to_string(rhs_rows) + " disagree");
  }
}

// Generic reduction product: out(i,j) = reduce_k combine(a_ik, b_kj), seeded
// with the identity of the reduction.
template <typename Combine, typename Reduce>
WMatrix product(const WMatrix& a, const WMatrix& b, Scalar seed, Combine combine, Reduce reduce,
                const char* op) {
  require_same_clodum(a.clodum(), b.clodum(), op);
  require_inner(a.cols(), b.rows(), op);
  WMatrix out = WMatrix::filled(a.clodum(), a.rows(), b.cols(), seed);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar acc = seed;
      for (std::size_t k = 0; k < a.cols(); ++k) acc = reduce(acc, combine(a(i, k), b(k, j)));
      out(i, j) = acc;
    }
  }
  return out;
}

template <typename Combine, typename Reduce>
WVector product(const WMatrix& a, const WVector& x, Scalar seed, Combine combine, Reduce reduce,
                const char* op) {
  require_same_clodum(a.clodum(), x.clodum(), op);
  require_inner(a.cols(), x.size(), op);
  WVector out = WVector::filled(a.clodum(), a.rows(), seed);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Scalar acc = seed;
    for (std::size_t k = 0; k < a.cols(); ++k) acc = reduce(acc, combine(a(i, k), x[k]));
    out[i] = acc;
  }
  return out;
}

template <typename F>
WMatrix elementwise(const WMatrix& a, const WMatrix& b, F f, const char* op) {
  require_same_clodum(a.clodum(), b.clodum(), op);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shapes differ");
  }
  WMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f(a(i, j), b(i, j));
  return out;
}

template <typename F>
WVector elementwise(const WVector& a, const WVector& b, F f, const char* op) {
  require_same_clodum(a.clodum(), b.clodum(), op);
  if (a.size() != b.size()) throw DimensionError(std::string(op) + ": lengths differ");
  WVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
  return out;
}

}  // namespace

WVector::WVector(Clodum clodum, std::vector<Scalar> data)
    : clodum_(clodum), data_(std::move(data)) {
  require_nonempty(data_.size(), "vector");
  for (Scalar v : data_) clodum_.require(v);
}

WVector WVector::filled(Clodum clodum, std::size_t n, Scalar value) {
  return WVector(clodum, std::vector<Scalar>(n, value));
}

WVector WVector::impulse(Clodum clodum, std::size_t n, std::size_t j) {
  WVector v = bottoms(clodum, n);
  v[j] = clodum.unit();
  return v;
}

bool WVector::all_bottom() const {
  for (Scalar v : data_)
    if (!clodum_.is_bottom(v)) return false;
  return true;
}

bool WVector::all_top() const {
  for (Scalar v : data_)
    if (!clodum_.is_top(v)) return false;
  return true;
}

WMatrix::WMatrix(Clodum clodum, std::size_t rows, std::size_t cols, std::vector<Scalar> data)
    : clodum_(clodum), rows_(rows), cols_(cols), data_(std::move(data)) {
  require_nonempty(rows_ * cols_, "matrix");
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows_ * cols_));
  }
  for (Scalar v : data_) clodum_.require(v);
}

WMatrix::WMatrix(Clodum clodum, std::initializer_list<std::initializer_list<Scalar>> rows)
    : clodum_(clodum), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_nonempty(data_.size(), "matrix");
  for (Scalar v : data_) clodum_.require(v);
}

WMatrix WMatrix::filled(Clodum clodum, std::size_t rows, std::size_t cols, Scalar value) {
  return WMatrix(clodum, rows, cols, std::vector<Scalar>(rows * cols, value));
}

WMatrix WMatrix::identity(Clodum clodum, std::size_t n) {
  WMatrix m = bottoms(clodum, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = clodum.unit();
  return m;
}

WMatrix WMatrix::dual_identity(Clodum clodum, std::size_t n) {
  WMatrix m = tops(clodum, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = clodum.dual_unit();
  return m;
}

WMatrix WMatrix::column_of(const WVector& v) {
  return WMatrix(v.clodum(), v.size(), 1, v.data());
}

WMatrix WMatrix::row_of(const WVector& v) {
  return WMatrix(v.clodum(), 1, v.size(), v.data());
}

WVector WMatrix::row(std::size_t i) const {
  return WVector(clodum_, std::vector<Scalar>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
}

WVector WMatrix::column(std::size_t j) const {
  std::vector<Scalar> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return WVector(clodum_, std::move(c));
}

WMatrix WMatrix::transpose() const {
  WMatrix t = filled(clodum_, cols_, rows_, clodum_.bottom());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool WMatrix::contains_top() const {
  for (Scalar v : data_)
    if (clodum_.is_top(v)) return true;
  return false;
}

bool WMatrix::contains_bottom() const {
  for (Scalar v : data_)
    if (clodum_.is_bottom(v)) return true;
  return false;
}

WMatrix maxmul(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return product(
      a, b, c.bottom(), [&](Scalar x, Scalar y) { return c.mult(x, y); },
      [&](Scalar x, Scalar y) { return c.join(x, y); }, "maxmul");
}

WVector maxmul(const WMatrix& a, const WVector& x) {
  const Clodum& c = a.clodum();
  return product(
      a, x, c.bottom(), [&](Scalar p, Scalar q) { return c.mult(p, q); },
      [&](Scalar p, Scalar q) { return c.join(p, q); }, "maxmul");
}

WMatrix minmul(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return product(
      a, b, c.top(), [&](Scalar x, Scalar y) { return c.dual_mult(x, y); },
      [&](Scalar x, Scalar y) { return c.meet(x, y); }, "minmul");
}

WVector minmul(const WMatrix& a, const WVector& x) {
  const Clodum& c = a.clodum();
  return product(
      a, x, c.top(), [&](Scalar p, Scalar q) { return c.dual_mult(p, q); },
      [&](Scalar p, Scalar q) { return c.meet(p, q); }, "minmul");
}

WMatrix min_adj_erosion_product(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return product(
      a, b, c.top(), [&](Scalar x, Scalar y) { return c.adj_erosion(x, y); },
      [&](Scalar x, Scalar y) { return c.meet(x, y); }, "min_adj_erosion_product");
}

WVector min_adj_erosion_product(const WMatrix& a, const WVector& x) {
  const Clodum& c = a.clodum();
  return product(
      a, x, c.top(), [&](Scalar p, Scalar q) { return c.adj_erosion(p, q); },
      [&](Scalar p, Scalar q) { return c.meet(p, q); }, "min_adj_erosion_product");
}

WMatrix max_adj_dilation_product(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return product(
      a, b, c.bottom(), [&](Scalar x, Scalar y) { return c.adj_dilation(x, y); },
      [&](Scalar x, Scalar y) { return c.join(x, y); }, "max_adj_dilation_product");
}

WVector max_adj_dilation_product(const WMatrix& a, const WVector& x) {
  const Clodum& c = a.clodum();
  return product(
      a, x, c.bottom(), [&](Scalar p, Scalar q) { return c.adj_dilation(p, q); },
      [&](Scalar p, Scalar q) { return c.join(p, q); }, "max_adj_dilation_product");
}

WMatrix adjoint_matrix(const WMatrix& a) {
  const Clodum& c = a.clodum();
  if (!c.is_self_conjugate()) {
    throw UnsupportedOperation(std::string(c.name()) + " has no conjugation");
  }
  WMatrix out = WMatrix::bottoms(c, a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = c.conjugate(a(i, j));
  return out;
}

WVector vec_dilation(const WMatrix& m, const WVector& x) { return maxmul(m, x); }

WVector vec_adjoint_erosion(const WMatrix& m, const WVector& y) {
  require_same_clodum(m.clodum(), y.clodum(), "vec_adjoint_erosion");
  if (m.rows() != y.size()) {
    throw DimensionError("vec_adjoint_erosion: matrix has " + std::to_string(m.rows()) +
                         " rows, vector has " + std::to_string(y.size()) + " entries");
  }
  const Clodum& c = m.clodum();
  WVector out = WVector::tops(c, m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Scalar acc = c.top();
    for (std::size_t i = 0; i < m.rows(); ++i) acc = c.meet(acc, c.adj_erosion(m(i, j), y[i]));
    out[j] = acc;
  }
  return out;
}

WVector vec_erosion(const WMatrix& m, const WVector& y) { return minmul(m, y); }

WVector vec_adjoint_dilation(const WMatrix& m, const WVector& x) {
  require_same_clodum(m.clodum(), x.clodum(), "vec_adjoint_dilation");
  if (m.rows() != x.size()) {
    throw DimensionError("vec_adjoint_dilation: matrix has " + std::to_string(m.rows()) +
                         " rows, vector has " + std::to_string(x.size()) + " entries");
  }
  const Clodum& c = m.clodum();
  WVector out = WVector::bottoms(c, m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Scalar acc = c.bottom();
    for (std::size_t i = 0; i < m.rows(); ++i) acc = c.join(acc, c.adj_dilation(m(i, j), x[i]));
    out[j] = acc;
  }
  return out;
}

WMatrix matrix_power(const WMatrix& a, int t) {
  if (!a.is_square()) throw DimensionError("matrix_power: matrix is not square");
  if (t < 0) throw DomainError("matrix_power: negative exponent");
  WMatrix r = WMatrix::identity(a.clodum(), a.rows());
  for (int i = 0; i < t; ++i) r = maxmul(a, r);
  return r;
}

WMatrix dual_matrix_power(const WMatrix& a, int t) {
  if (!a.is_square()) throw DimensionError("dual_matrix_power: matrix is not square");
  if (t < 0) throw DomainError("dual_matrix_power: negative exponent");
  WMatrix r = WMatrix::dual_identity(a.clodum(), a.rows());
  for (int i = 0; i < t; ++i) r = minmul(a, r);
  return r;
}

WMatrix join(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return elementwise(a, b, [&](Scalar x, Scalar y) { return c.join(x, y); }, "join");
}

WMatrix meet(const WMatrix& a, const WMatrix& b) {
  const Clodum& c = a.clodum();
  return elementwise(a, b, [&](Scalar x, Scalar y) { return c.meet(x, y); }, "meet");
}

WVector join(const WVector& a, const WVector& b) {
  const Clodum& c = a.clodum();
  return elementwise(a, b, [&](Scalar x, Scalar y) { return c.join(x, y); }, "join");
}

WVector meet(const WVector& a, const WVector& b) {
  const Clodum& c = a.clodum();
  return elementwise(a, b, [&](Scalar x, Scalar y) { return c.meet(x, y); }, "meet");
}

WVector scale(Scalar a, const WVector& x) {
  WVector out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x.clodum().mult(a, x[i]);
  return out;
}

WVector dual_scale(Scalar a, const WVector& x) {
  WVector out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x.clodum().dual_mult(a, x[i]);
  return out;
}

WMatrix scale(Scalar a, const WMatrix& m) {
  WMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m.clodum().mult(a, m(i, j));
  return out;
}

WVector conjugate(const WVector& x) {
  WVector out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x.clodum().conjugate(x[i]);
  return out;
}

WMatrix hconcat(const std::vector<WMatrix>& blocks) {
  if (blocks.empty()) throw DimensionError("hconcat: no blocks");
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    require_same_clodum(blocks.front().clodum(), b.clodum(), "hconcat");
    if (b.rows() != rows) throw DimensionError("hconcat: row counts differ");
    cols += b.cols();
  }
  WMatrix out = WMatrix::bottoms(blocks.front().clodum(), rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, offset + j) = b(i, j);
    offset += b.cols();
  }
  return out;
}

WMatrix vconcat(const std::vector<WMatrix>& blocks) {
  if (blocks.empty()) throw DimensionError("vconcat: no blocks");
  const std::size_t cols = blocks.front().cols();
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    require_same_clodum(blocks.front().clodum(), b.clodum(), "vconcat");
    if (b.cols() != cols) throw DimensionError("vconcat: column counts differ");
    rows += b.rows();
  }
  WMatrix out = WMatrix::bottoms(blocks.front().clodum(), rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out(offset + i, j) = b(i, j);
    offset += b.rows();
  }
  return out;
}

bool leq(const WVector& a, const WVector& b) {
  require_same_clodum(a.clodum(), b.clodum(), "leq");
  if (a.size() != b.size()) throw DimensionError("leq: lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.clodum().leq(a[i], b[i])) return false;
  return true;
}

bool leq(const WMatrix& a, const WMatrix& b) {
  require_same_clodum(a.clodum(), b.clodum(), "leq");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("leq: shapes differ");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.clodum().leq(a(i, j), b(i, j))) return false;
  return true;
}

bool approx_equal(const WVector& a, const WVector& b) {
  if (!(a.clodum() == b.clodum()) || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.clodum().equal(a[i], b[i])) return false;
  return true;
}

bool approx_equal(const WMatrix& a, const WMatrix& b) {
  if (!(a.clodum() == b.clodum()) || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.clodum().equal(a(i, j), b(i, j))) return false;
  return true;
}

}  // namespace wlsys
