#include "wlsys/control.hpp"

#include <string>

#include "wlsys/error.hpp"

namespace wlsys {

namespace {

void require_constant(const SystemSpec& sys, std::size_t k, const char* what) {
  if (!sys.is_constant()) throw UnsupportedOperation(std::string(what) + " needs constant matrices");
  if (k == 0) throw DomainError(std::string(what) + ": k must be at least 1");
}

}  // namespace

WMatrix controllability_matrix(const SystemSpec& sys, std::size_t k) {
  require_constant(sys, k, "controllability_matrix");
  const bool max_mode = sys.mode() == SystemMode::Max;
  const WMatrix a = sys.a(0);
  std::vector<WMatrix> blocks{sys.b(0)};
  while (blocks.size() < k) blocks.push_back(max_mode ? maxmul(a, blocks.back()) : minmul(a, blocks.back()));
  return hconcat(blocks);
}

WMatrix observability_matrix(const SystemSpec& sys, std::size_t k) {
  require_constant(sys, k, "observability_matrix");
  const bool max_mode = sys.mode() == SystemMode::Max;
  const WMatrix a = sys.a(0);
  auto mul = [&](const WMatrix& x, const WMatrix& y) { return max_mode ? maxmul(x, y) : minmul(x, y); };
  std::vector<WMatrix> blocks{mul(sys.c(0), a)};
  while (blocks.size() < k) blocks.push_back(mul(blocks.back(), a));
  return vconcat(blocks);
}

ReachReport reach(const SystemSpec& sys, std::size_t k, const WVector& target, const std::optional<WVector>& x0) {
  if (sys.mode() != SystemMode::Max) throw UnsupportedOperation("reach is defined for max-mode systems");
  WMatrix c_k = controllability_matrix(sys, k);
  if (target.size() != sys.states()) {
    throw DimensionError("target has " + std::to_string(target.size()) + " entries, expected " +
                         std::to_string(sys.states()));
  }
  SolveReport rep = solve_max(c_k, target);

  const std::size_t p = sys.inputs();
  std::vector<WVector> by_time;
  by_time.reserve(k);
  for (std::size_t t = 1; t <= k; ++t) {
    const std::size_t block = k - t;
    std::vector<Scalar> u(rep.solution.data().begin() + static_cast<std::ptrdiff_t>(block * p),
                          rep.solution.data().begin() + static_cast<std::ptrdiff_t>((block + 1) * p));
    by_time.emplace_back(sys.clodum(), std::move(u));
  }

  std::optional<bool> from_x0;
  if (x0) {
    if (x0->size() != sys.states()) throw DimensionError("x0 has the wrong number of entries");
    const WVector free = maxmul(matrix_power(sys.a(0), static_cast<int>(k)), *x0);
    from_x0 = approx_equal(join(free, rep.achieved), target);
  }
  return ReachReport{std::move(rep), std::move(c_k), std::move(by_time), from_x0};
}

ObserveReport observe(const SystemSpec& sys, std::size_t k, const WVector& y_seq) {
  WMatrix o_k = observability_matrix(sys, k);
  if (y_seq.size() != o_k.rows()) {
    throw DimensionError("observation sequence has " + std::to_string(y_seq.size()) + " entries, expected " +
                         std::to_string(o_k.rows()));
  }
  SolveReport rep = sys.mode() == SystemMode::Max ? solve_max(o_k, y_seq) : solve_min(o_k, y_seq);
  return ObserveReport{std::move(rep), std::move(o_k)};
}

}  // namespace wlsys
