#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wlsys/spectral.hpp"
#include "wlsys/state_space.hpp"

namespace wlsys {

// ---------------------------------------------------------------------------
// Recursive max-sum / min-sum filters
//
//   y(t) = V_{i=1..n} a_i * y(t-i)  V  V_{j=0..m} b_j * u(t-j)
//
// and the dual with /\ and *'. Null coefficients drop their term.

struct FilterSpec {
  std::vector<Scalar> a;  // a_1..a_n
  std::vector<Scalar> b;  // b_0..b_m
  SystemMode mode = SystemMode::Max;
  Clodum clodum = Clodum(ClodumKind::MaxPlus);

  std::size_t order() const { return a.size(); }
};

// Companion realization of an m = 0 filter with x_i(t) = y(t-n+i):
// A has the unit on its superdiagonal and [a_n .. a_1] as its last row,
// B = [null .. null, b_0]^T, C selects x_n, D is null. Throws
// UnsupportedOperation when m > 0.
SystemSpec filter_to_state_space(const FilterSpec& f);

// Direct evaluation of the difference equation for t = 0..T with y and u null
// before t = 1. `inputs` holds u(1..T).
std::vector<Scalar> filter_response(const FilterSpec& f, const std::vector<Scalar>& inputs);

// ---------------------------------------------------------------------------
// Chamfer distance transform with obstacles (min-plus)

struct GridField {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, std::size_t>> sources;
  std::vector<std::pair<std::size_t, std::size_t>> obstacles;
  Scalar step_a = 1.0;  // horizontal / vertical
  Scalar step_b = 1.0;  // diagonal
};

struct DistanceResult {
  std::vector<Scalar> field;                 // row-major, +inf where unreachable
  std::size_t passes_used = 0;               // passes executed, the final unchanged one included
  bool converged = false;                    // an unchanged pass followed a pass in the other direction
  bool empty_sources = false;
  std::vector<std::vector<Scalar>> history;  // field after each pass
};

// Alternating forward (row-major) and backward (reverse) passes with the two
// half masks of the 3x3 chamfer mask. Obstacles are reset to +inf every pass,
// neighbours outside the grid contribute +inf.
DistanceResult distance_transform(const GridField& g, std::size_t max_passes = 64);

// ---------------------------------------------------------------------------
// Viterbi decoding and controlled max-product saliency systems

struct HmmSpec {
  WMatrix a = WMatrix::bottoms(Clodum(ClodumKind::ProductTNorm), 1, 1);  // a_ij = Pr(s_t = j | s_{t-1} = i)
  std::vector<Scalar> pi;                    // initial probabilities
  std::vector<std::vector<Scalar>> p;        // p[t][i] for t = 0..T

  // Optional control part used by the saliency model.
  std::optional<WMatrix> b;                  // n x m
  std::vector<std::vector<Scalar>> u;        // u[t][j] for t = 0..T
  std::vector<Scalar> c;                     // output weights on states (empty: all ones)
  std::vector<Scalar> d;                     // output weights on inputs (empty: all zeros)
  ClodumKind star = ClodumKind::ProductTNorm;

  std::size_t states() const { return a.rows(); }
  std::size_t steps() const { return p.empty() ? 0 : p.size() - 1; }
};

struct ViterbiResult {
  Scalar score = 0.0;
  std::vector<std::size_t> path;  // s_0..s_T
  Trajectory trajectory;          // x(0..T) and y(t) = V_i x_i(t)
};

// Max-product recursion x_i(t) = (V_j a_ji x_j(t-1)) p_i(t), x_i(0) = pi_i p_i(0).
// Ties in the backtracking go to the smallest state index.
ViterbiResult viterbi(const HmmSpec& h, std::size_t horizon);

// The same recursion in max-plus on log-parameters (log 0 = -inf).
struct LogViterbiResult {
  Scalar log_score = 0.0;
  std::vector<std::size_t> path;
};
LogViterbiResult viterbi_log_domain(const HmmSpec& h, std::size_t horizon);

// The recursion as a time-varying max-product system: A(t) = [a_ji p_i(t)],
// C = [1 .. 1], null input.
SystemSpec viterbi_system(const HmmSpec& h);
WVector viterbi_initial_state(const HmmSpec& h);

// x_i(t) = (V_j a_ji * x_j(t-1)) * p_i(t)  V  V_j b_ij * u_j(t), with * the
// configured t-norm (product or min).
WVector controlled_saliency_step(const HmmSpec& h, const WVector& x_prev, std::size_t t);
// y(t) = V_i c_i * x_i(t) V V_j d_j * u_j(t).
Scalar saliency_output(const HmmSpec& h, const WVector& x, std::size_t t);

// ---------------------------------------------------------------------------
// Fuzzy Markov chains

struct FmcSpec {
  WMatrix a;  // acts on column state vectors: x(t+1) = A x(t)
};

// A = P^T for a row-stochastic-style transition matrix P.
FmcSpec fmc_from_transition(const WMatrix& p);

struct FmcAnalysis {
  std::vector<WMatrix> powers;       // A^(1) .. A^(tau + period)
  std::size_t tau = 0;               // A^(tau + period) == A^(tau)
  std::size_t period = 0;
  bool converged = false;            // a repetition was found within the cap
  bool unit_diagonal = false;
  std::optional<WMatrix> metric_matrix;
  std::vector<WVector> stationary;   // fixed points of A that pass eigen_check with lambda = e
  bool ergodic = false;
};

FmcAnalysis fmc_analyze(const FmcSpec& f, std::size_t max_powers = 1000);

}  // namespace wlsys
