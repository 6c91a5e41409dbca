#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wlsys/solver.hpp"
#include "wlsys/state_space.hpp"

namespace wlsys {

// C_k = [B, A B, ..., A^(k-1) B], an n x (k p) matrix. Block j multiplies
// u(k - j), so the rightmost block acts on u(1).
WMatrix controllability_matrix(const SystemSpec& sys, std::size_t k);

// O_k stacks C A, C A^(2), ..., C A^(k): a (k q) x n matrix.
WMatrix observability_matrix(const SystemSpec& sys, std::size_t k);

struct ReachReport {
  SolveReport report;  // solution is ordered like the blocks of C_k
  WMatrix c_k;
  std::vector<WVector> inputs_by_time;  // u(1), ..., u(k)
  // Set when x(0) is given: whether A^(k) x(0) V C_k u equals the target.
  std::optional<bool> reaches_from_x0;
};

// Greatest input sequence with C_k u <= target. `exact` means the target is
// weakly reachable in k steps. Max-mode systems with constant matrices only.
ReachReport reach(const SystemSpec& sys, std::size_t k, const WVector& target,
                  const std::optional<WVector>& x0 = std::nullopt);

struct ObserveReport {
  SolveReport report;  // solution is the estimate of x(0)
  WMatrix o_k;
};

// Greatest x(0) with O_k x(0) <= y, where y stacks y(1..k). For min-mode
// systems the dual: smallest x(0) with O_k x(0) >= y.
ObserveReport observe(const SystemSpec& sys, std::size_t k, const WVector& y_seq);

}  // namespace wlsys
