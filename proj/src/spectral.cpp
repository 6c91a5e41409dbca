#include "wlsys/spectral.hpp"

#include <algorithm>

#include "wlsys/error.hpp"

namespace wlsys {

namespace {

void require_square(const WMatrix& a, const char* op) {
  if (!a.is_square()) throw DimensionError(std::string(op) + ": matrix is not square");
}

std::vector<bool> reachable(const std::vector<std::vector<std::size_t>>& adj, std::size_t from) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Splits a closed walk (first node repeated implicitly at the end) into
// elementary cycles.
std::vector<std::vector<std::size_t>> split_closed_walk(const std::vector<std::size_t>& walk) {
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> stack;
  auto push = [&](std::size_t v) {
    auto it = std::find(stack.begin(), stack.end(), v);
    if (it != stack.end()) {
      cycles.emplace_back(it, stack.end());
      stack.erase(it, stack.end());
    }
    stack.push_back(v);
  };
  for (std::size_t v : walk) push(v);
  push(walk.front());
  return cycles;
}

std::vector<std::size_t> canonical_rotation(std::vector<std::size_t> cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  return cycle;
}

// Power-trace route for graphs too dense to enumerate: the best closed walk of
// length k <= n through node i is (A^(k))_ii, and its k-th root bounds every
// elementary-cycle mean it contains from above, with equality for the
// elementary cycles themselves.
CycleMean power_trace_cycle_mean(const WMatrix& a) {
  const Clodum& c = a.clodum();
  const std::size_t n = a.rows();
  // argmax[k][i*n+j]: the middle node m achieving (A^(k+1))_ij = a_im * (A^(k))_mj.
  std::vector<std::vector<std::size_t>> argmax;
  std::vector<WMatrix> powers{a};
  argmax.emplace_back(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) argmax[0][i * n + j] = j;

  Scalar best = c.bottom();
  std::size_t best_k = 0;
  std::size_t best_i = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const WMatrix& p = powers.back();
    for (std::size_t i = 0; i < n; ++i) {
      if (c.is_bottom(p(i, i))) continue;
      const Scalar mean = c.kth_root(p(i, i), static_cast<int>(k));
      if (best_k == 0 || c.less(best, mean)) {
        best = mean;
        best_k = k;
        best_i = i;
      }
    }
    if (k == n) break;
    WMatrix next = WMatrix::bottoms(c, n, n);
    std::vector<std::size_t> arg(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Scalar acc = c.bottom();
        std::size_t who = 0;
        for (std::size_t m = 0; m < n; ++m) {
          const Scalar v = c.mult(a(i, m), p(m, j));
          if (v > acc) {
            acc = v;
            who = m;
          }
        }
        next(i, j) = acc;
        arg[i * n + j] = who;
      }
    }
    powers.push_back(std::move(next));
    argmax.push_back(std::move(arg));
  }

  CycleMean out{best, {}, 0, false};
  if (best_k == 0) return out;

  // Rebuild the optimal closed walk i -> ... -> i of length best_k.
  std::vector<std::size_t> walk{best_i};
  std::size_t cur = best_i;
  for (std::size_t k = best_k; k > 1; --k) {
    cur = argmax[k - 1][cur * n + best_i];
    walk.push_back(cur);
  }
  Scalar best_cycle_mean = c.bottom();
  for (auto& cyc : split_closed_walk(walk)) {
    const Scalar m = cycle_mean(a, cyc);
    if (out.critical_cycle.empty() || c.less(best_cycle_mean, m)) {
      best_cycle_mean = m;
      out.critical_cycle = canonical_rotation(cyc);
    }
  }
  return out;
}

Scalar dual_power_trace(const WMatrix& a) {
  const Clodum& c = a.clodum();
  const std::size_t n = a.rows();
  Scalar best = c.top();
  WMatrix p = a;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) best = c.meet(best, c.dual_kth_root(p(i, i), static_cast<int>(k)));
    if (k < n) p = minmul(a, p);
  }
  return best;
}

}  // namespace

PrecedenceGraph::PrecedenceGraph(const WMatrix& a, bool dual) {
  require_square(a, "PrecedenceGraph");
  const Clodum& c = a.clodum();
  succ_.resize(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const bool arc = dual ? !c.is_top(a(i, j)) : !c.is_bottom(a(i, j));
      if (arc) succ_[i].push_back(j);
    }
}

std::size_t PrecedenceGraph::arc_count() const {
  std::size_t total = 0;
  for (const auto& s : succ_) total += s.size();
  return total;
}

bool PrecedenceGraph::has_arc(std::size_t i, std::size_t j) const {
  return std::binary_search(succ_[i].begin(), succ_[i].end(), j);
}

bool PrecedenceGraph::strongly_connected() const {
  const std::size_t n = succ_.size();
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : succ_[i]) pred[j].push_back(i);
  const auto fwd = reachable(succ_, 0);
  const auto bwd = reachable(pred, 0);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool for_each_elementary_cycle(const PrecedenceGraph& g,
                               const std::function<void(const std::vector<std::size_t>&)>& visit,
                               std::size_t budget) {
  const std::size_t n = g.size();
  std::size_t steps = 0;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);

  for (std::size_t s = 0; s < n; ++s) {
    // Nodes >= s that can reach s inside the subgraph induced by {s, s+1, ...}.
    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t i = s; i < n; ++i)
      for (std::size_t j : g.successors(i))
        if (j >= s) pred[j].push_back(i);
    const auto can_return = reachable(pred, s);

    path.assign(1, s);
    on_path.assign(n, false);
    on_path[s] = true;

    // Explicit DFS stack of (node, next successor index).
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    bool fresh = true;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      if (fresh) {
        // Closing first keeps the visit order lexicographic: a sequence is
        // smaller than any of its extensions.
        if (g.has_arc(u, s)) visit(path);
        fresh = false;
      }
      const auto& succ = g.successors(u);
      while (idx < succ.size() && (succ[idx] <= s || on_path[succ[idx]] || !can_return[succ[idx]])) ++idx;
      if (idx == succ.size()) {
        on_path[u] = false;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      if (++steps > budget) return false;
      const std::size_t v = succ[idx++];
      on_path[v] = true;
      path.push_back(v);
      stack.emplace_back(v, 0);
      fresh = true;
    }
  }
  return true;
}

Scalar cycle_weight(const WMatrix& a, const std::vector<std::size_t>& cycle) {
  const Clodum& c = a.clodum();
  Scalar w = c.unit();
  for (std::size_t k = 0; k < cycle.size(); ++k) w = c.mult(w, a(cycle[k], cycle[(k + 1) % cycle.size()]));
  return w;
}

Scalar cycle_mean(const WMatrix& a, const std::vector<std::size_t>& cycle) {
  return a.clodum().kth_root(cycle_weight(a, cycle), static_cast<int>(cycle.size()));
}

Scalar dual_cycle_weight(const WMatrix& a, const std::vector<std::size_t>& cycle) {
  const Clodum& c = a.clodum();
  Scalar w = c.dual_unit();
  for (std::size_t k = 0; k < cycle.size(); ++k)
    w = c.dual_mult(w, a(cycle[k], cycle[(k + 1) % cycle.size()]));
  return w;
}

Scalar dual_cycle_mean_of(const WMatrix& a, const std::vector<std::size_t>& cycle) {
  return a.clodum().dual_kth_root(dual_cycle_weight(a, cycle), static_cast<int>(cycle.size()));
}

CycleMean cycle_mean_eigenvalue(const WMatrix& a, std::size_t budget) {
  require_square(a, "cycle_mean_eigenvalue");
  const Clodum& c = a.clodum();
  const PrecedenceGraph g(a);

  Scalar lambda = c.bottom();
  bool any = false;
  const bool complete = for_each_elementary_cycle(
      g,
      [&](const std::vector<std::size_t>& cyc) {
        const Scalar m = cycle_mean(a, cyc);
        if (!any || m > lambda) lambda = m;
        any = true;
      },
      budget);
  if (!complete) return power_trace_cycle_mean(a);

  CycleMean out{lambda, {}, 0, true};
  if (!any) return out;
  for_each_elementary_cycle(
      g,
      [&](const std::vector<std::size_t>& cyc) {
        if (!c.equal(cycle_mean(a, cyc), lambda)) return;
        if (out.critical_count++ == 0) out.critical_cycle = cyc;
      },
      budget);
  return out;
}

Scalar dual_cycle_mean(const WMatrix& a, std::size_t budget) {
  require_square(a, "dual_cycle_mean");
  const Clodum& c = a.clodum();
  const PrecedenceGraph g(a, /*dual=*/true);
  Scalar lambda = c.top();
  const bool complete = for_each_elementary_cycle(
      g, [&](const std::vector<std::size_t>& cyc) { lambda = c.meet(lambda, dual_cycle_mean_of(a, cyc)); },
      budget);
  if (!complete) return dual_power_trace(a);
  return lambda;
}

bool is_irreducible(const WMatrix& a) { return PrecedenceGraph(a).strongly_connected(); }

MetricMatrix metric_matrix(const WMatrix& a) {
  require_square(a, "metric_matrix");
  const Clodum& c = a.clodum();
  WMatrix power = a;
  WMatrix gamma = a;
  for (std::size_t k = 2; k <= a.rows(); ++k) {
    power = maxmul(a, power);
    gamma = join(gamma, power);
  }
  const Scalar lambda = cycle_mean_eigenvalue(a).lambda;
  return {std::move(gamma), c.leq(lambda, c.unit())};
}

bool eigen_check(const WMatrix& a, const WVector& v, Scalar lambda) {
  if (v.all_bottom()) return false;
  return approx_equal(maxmul(a, v), scale(lambda, v));
}

std::vector<WVector> eigenvector_candidates(const WMatrix& a) {
  require_square(a, "eigenvector_candidates");
  const Clodum& c = a.clodum();
  const CycleMean cm = cycle_mean_eigenvalue(a);
  std::vector<WVector> out;
  if (cm.critical_cycle.empty()) return out;

  WMatrix gamma = a;
  if (c.is_clog()) {
    if (c.is_top(cm.lambda) || c.is_bottom(cm.lambda)) return out;
    gamma = metric_matrix(scale(c.conjugate(cm.lambda), a)).matrix;
  } else {
    gamma = metric_matrix(a).matrix;
  }
  for (std::size_t node : cm.critical_cycle) {
    WVector v = gamma.column(node);
    if (eigen_check(a, v, cm.lambda)) out.push_back(std::move(v));
  }
  return out;
}

SpectralReport analyze_spectrum(const WMatrix& a) {
  const CycleMean cm = cycle_mean_eigenvalue(a);
  MetricMatrix mm = metric_matrix(a);
  SpectralReport r{cm.lambda, cm.critical_cycle, cm.critical_count, is_irreducible(a), std::nullopt,
                   mm.converged, dual_cycle_mean(a)};
  if (mm.converged) r.metric_matrix = std::move(mm.matrix);
  return r;
}

}  // namespace wlsys
