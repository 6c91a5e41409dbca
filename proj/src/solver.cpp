#include "wlsys/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wlsys/error.hpp"

namespace wlsys {

namespace {

void check_operands(const WMatrix& a, const WVector& b, const char* op) {
  require_same_clodum(a.clodum(), b.clodum(), op);
  if (a.rows() != b.size()) {
    throw DimensionError(std::string(op) + ": matrix has " + std::to_string(a.rows()) +
                         " rows but right-hand side has " + std::to_string(b.size()) + " entries");
  }
}

SolveReport make_report(WVector solution, WVector achieved, const WVector& b) {
  const Clodum& c = b.clodum();
  SolveReport r{std::move(solution), std::move(achieved), true, 0.0, 0.0};
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Scalar got = r.achieved[i];
    const Scalar want = b[i];
    if (c.equal(got, want)) continue;
    r.exact = false;
    if (std::isinf(want)) continue;
    const double gap = std::isinf(got) ? std::numeric_limits<double>::infinity() : std::fabs(want - got);
    r.residual_linf = std::fmax(r.residual_linf, gap);
    r.residual_l1 += gap;
  }
  return r;
}

}  // namespace

SolveReport solve_max(const WMatrix& a, const WVector& b) {
  check_operands(a, b, "solve_max");
  WVector x = vec_adjoint_erosion(a, b);
  WVector achieved = vec_dilation(a, x);
  return make_report(std::move(x), std::move(achieved), b);
}

SolveReport solve_min(const WMatrix& a, const WVector& b) {
  check_operands(a, b, "solve_min");
  WVector y = vec_adjoint_dilation(a, b);
  WVector achieved = vec_erosion(a, y);
  return make_report(std::move(y), std::move(achieved), b);
}

}  // namespace wlsys
