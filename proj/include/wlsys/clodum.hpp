#pragma once

#include <string>
#include <string_view>

namespace wlsys {

// Scalars are extended reals. The least and greatest elements of a carrier are
// stored as the carrier bounds themselves (IEEE +-inf where the carrier is
// unbounded), but no arithmetic on them goes through IEEE infinity rules:
// every product is dispatched through the explicit case tables in Clodum.
using Scalar = double;

inline constexpr double kDefaultTolerance = 1e-9;

enum class ClodumKind {
  MaxPlus,       // ([-inf,+inf], max, min, +, +')
  MaxTimes,      // ([0,+inf], max, min, x, x')
  MaxMin,        // ([0,1], max, min, min, max)
  ProductTNorm,  // ([0,1], max, min, product, probabilistic sum)
};

/// A scalar clodum: a complete lattice with a pair of dual multiplications.
///
/// `mult` distributes over max and has unit `unit()` and null `bottom()`;
/// `dual_mult` distributes over min with unit `dual_unit()` and null `top()`.
/// The adjoint operations satisfy
///
///     mult(a, v) <= w       <=>  v <= adj_erosion(a, w)
///     dual_mult(a, w) >= v  <=>  w >= adj_dilation(a, v)
///
/// Instances are small immutable values; two cloduma compare equal when they
/// describe the same algebra, regardless of the comparison tolerance.
class Clodum {
 public:
  explicit Clodum(ClodumKind kind, double tolerance = kDefaultTolerance);

  // Accepts "max-plus", "max-times", "max-min" and "product-tnorm".
  // Throws ConfigError for anything else.
  static Clodum make(std::string_view name, double tolerance = kDefaultTolerance);

  ClodumKind kind() const { return kind_; }
  std::string_view name() const;
  std::string carrier() const;
  double tolerance() const { return tolerance_; }
  Clodum with_tolerance(double tolerance) const { return Clodum(kind_, tolerance); }

  Scalar bottom() const;
  Scalar top() const;
  Scalar unit() const;
  Scalar dual_unit() const;

  // Finite scalars form a group under mult (max-plus, max-times).
  bool is_clog() const;
  // All built-in instances carry a conjugation; kept as a query so callers
  // can guard operations that need it.
  bool is_self_conjugate() const { return true; }

  bool contains(Scalar v) const;
  bool is_bottom(Scalar v) const { return v == bottom(); }
  bool is_top(Scalar v) const { return v == top(); }

  Scalar join(Scalar a, Scalar b) const { return a < b ? b : a; }
  Scalar meet(Scalar a, Scalar b) const { return b < a ? b : a; }
  Scalar mult(Scalar a, Scalar b) const;
  Scalar dual_mult(Scalar a, Scalar b) const;

  Scalar conjugate(Scalar a) const;
  Scalar adj_erosion(Scalar a, Scalar w) const;
  Scalar adj_dilation(Scalar a, Scalar v) const;

  // k-fold products a*a*...*a (k >= 0; k = 0 gives the unit).
  Scalar power(Scalar a, int k) const;
  Scalar dual_power(Scalar a, int k) const;
  // x with power(x, k) == a; used for cycle means. k >= 1.
  Scalar kth_root(Scalar a, int k) const;
  Scalar dual_kth_root(Scalar a, int k) const;

  // Absolute-value seminorm a v a*.
  Scalar magnitude(Scalar a) const { return join(a, conjugate(a)); }

  // Exact for infinite sentinels, absolute-plus-relative tolerance otherwise.
  bool equal(Scalar a, Scalar b) const;
  bool leq(Scalar a, Scalar b) const { return a <= b || equal(a, b); }
  bool less(Scalar a, Scalar b) const { return a < b && !equal(a, b); }

  // Textual scalars: decimal literals, "-inf", "+inf" ("inf" is +inf).
  // Throws DomainError when the value lies outside the carrier.
  Scalar parse(std::string_view token) const;
  std::string format(Scalar v) const;

  // Throws DomainError when v is not in the carrier.
  void require(Scalar v) const;

  friend bool operator==(const Clodum& a, const Clodum& b) { return a.kind_ == b.kind_; }

 private:
  ClodumKind kind_;
  double tolerance_;
};

// Throws ClodumMismatch unless both operands use the same algebra.
void require_same_clodum(const Clodum& a, const Clodum& b, std::string_view what);

}  // namespace wlsys
