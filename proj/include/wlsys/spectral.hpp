#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "wlsys/matrix.hpp"

namespace wlsys {

/// Weighted digraph of a square matrix: arc i -> j whenever a_ij is above the
/// bottom (or, for the dual graph, below the top).
class PrecedenceGraph {
 public:
  explicit PrecedenceGraph(const WMatrix& a, bool dual = false);

  std::size_t size() const { return succ_.size(); }
  std::size_t arc_count() const;
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_[i]; }
  bool has_arc(std::size_t i, std::size_t j) const;
  bool strongly_connected() const;

 private:
  std::vector<std::vector<std::size_t>> succ_;
};

struct CycleMean {
  Scalar lambda;
  // Node sequence starting at its smallest node, without repeating it.
  // Empty when the graph is acyclic.
  std::vector<std::size_t> critical_cycle;
  // Number of elementary cycles whose mean equals lambda; 0 when the
  // enumeration budget was exceeded and lambda came from the power-trace route.
  std::size_t critical_count = 0;
  bool enumerated = true;
};

// Maximum number of DFS extensions spent enumerating elementary cycles before
// falling back to the power-trace evaluation.
inline constexpr std::size_t kCycleEnumerationBudget = 2'000'000;

// Visits every elementary cycle once, in lexicographic order of node
// sequences rotated to start at their smallest node. Returns false if the
// visit stopped because the step budget ran out.
bool for_each_elementary_cycle(const PrecedenceGraph& g,
                               const std::function<void(const std::vector<std::size_t>&)>& visit,
                               std::size_t budget = kCycleEnumerationBudget);

// Max-star weight of a cycle given as a node sequence (closing arc implied).
Scalar cycle_weight(const WMatrix& a, const std::vector<std::size_t>& cycle);
Scalar cycle_mean(const WMatrix& a, const std::vector<std::size_t>& cycle);
Scalar dual_cycle_weight(const WMatrix& a, const std::vector<std::size_t>& cycle);
Scalar dual_cycle_mean_of(const WMatrix& a, const std::vector<std::size_t>& cycle);

// Principal eigenvalue: the maximum cycle mean, with the lexicographically
// smallest critical cycle. Bottom for an acyclic graph.
CycleMean cycle_mean_eigenvalue(const WMatrix& a, std::size_t budget = kCycleEnumerationBudget);

// Dual principal eigenvalue: the minimum dual cycle mean. Top when acyclic.
Scalar dual_cycle_mean(const WMatrix& a, std::size_t budget = kCycleEnumerationBudget);

bool is_irreducible(const WMatrix& a);

struct MetricMatrix {
  WMatrix matrix;  // A v A^(2) v ... v A^(n)
  bool converged;  // lambda(A) <= e
};

MetricMatrix metric_matrix(const WMatrix& a);

// True iff A (max-star) v == lambda * v within tolerance and v is not all bottom.
bool eigen_check(const WMatrix& a, const WVector& v, Scalar lambda);

// Columns of the metric matrix of the lambda-normalised matrix taken at the
// critical-cycle nodes, keeping those that pass eigen_check.
std::vector<WVector> eigenvector_candidates(const WMatrix& a);

struct SpectralReport {
  Scalar lambda;
  std::vector<std::size_t> critical_cycle;
  std::size_t critical_count = 0;
  bool is_irreducible = false;
  std::optional<WMatrix> metric_matrix;  // present only when converged
  bool metric_converged = false;
  Scalar dual_lambda;
};

SpectralReport analyze_spectrum(const WMatrix& a);

}  // namespace wlsys
