#pragma once

#include "wlsys/matrix.hpp"

namespace wlsys {

/// Result of a one-sided equation solve.
///
/// For `solve_max`, `achieved = A (max-star) solution <= b`; for `solve_min`,
/// `achieved = A (min-star') solution >= b`. Residual norms are taken over the
/// coordinates where b is finite; a sentinel coordinate of b that is not
/// matched exactly only clears `exact`.
struct SolveReport {
  WVector solution;
  WVector achieved;
  bool exact = false;
  double residual_linf = 0.0;
  double residual_l1 = 0.0;
};

// Greatest subsolution of A (max-star) x = b: x = eps_A(b). When the equation
// is solvable this is its greatest solution; otherwise A x is the opening of b
// onto the max-star column span of A.
SolveReport solve_max(const WMatrix& a, const WVector& b);

// Smallest supersolution of A (min-star') y = b: y = delta'_A(b), the adjoint
// dilation of the min-star' product. Dual of solve_max.
SolveReport solve_min(const WMatrix& a, const WVector& b);

}  // namespace wlsys
