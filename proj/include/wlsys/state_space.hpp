#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "wlsys/matrix.hpp"

namespace wlsys {

// Max-star systems combine with V and the max-star product, min-star' systems
// with /\ and the min-star' product. The null signal value is the bottom for
// max systems and the top for min systems.
enum class SystemMode { Max, Min };

/// A system matrix that is either constant or supplied per time step.
class MatrixProvider {
 public:
  explicit MatrixProvider(WMatrix constant);
  MatrixProvider(std::function<WMatrix(int)> at_time, std::size_t rows, std::size_t cols);

  // Throws DimensionError if a callback returns a matrix of the wrong shape.
  WMatrix at(int t) const;
  bool is_constant() const { return constant_.has_value(); }
  const WMatrix& constant() const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::optional<WMatrix> constant_;
  std::function<WMatrix(int)> at_time_;
  std::size_t rows_;
  std::size_t cols_;
};

/// State-space system
///
///     x(t) = A(t) x(t-1)  V  B(t) u(t)
///     y(t) = C(t) x(t)    V  D(t) u(t)
///
/// (with /\ and min-star' products for SystemMode::Min).
class SystemSpec {
 public:
  SystemSpec(Clodum clodum, SystemMode mode, MatrixProvider a, MatrixProvider b, MatrixProvider c,
             MatrixProvider d);

  static SystemSpec constant(SystemMode mode, WMatrix a, WMatrix b, WMatrix c, WMatrix d);

  const Clodum& clodum() const { return clodum_; }
  SystemMode mode() const { return mode_; }
  std::size_t states() const { return a_.rows(); }
  std::size_t inputs() const { return b_.cols(); }
  std::size_t outputs() const { return c_.rows(); }
  bool is_constant() const;
  Scalar null_value() const;

  WMatrix a(int t) const { return a_.at(t); }
  WMatrix b(int t) const { return b_.at(t); }
  WMatrix c(int t) const { return c_.at(t); }
  WMatrix d(int t) const { return d_.at(t); }

 private:
  Clodum clodum_;
  SystemMode mode_;
  MatrixProvider a_, b_, c_, d_;
};

/// Finite-support discrete-time signal. Samples outside [start, start+size)
/// are null: bottom for max-mode signals, top for min-mode signals.
class Signal {
 public:
  Signal(Clodum clodum, SystemMode mode, int start, std::vector<Scalar> samples);

  // Lattice impulse: unit at t = 0 (max mode) or dual unit at t = 0 (min mode).
  static Signal impulse(Clodum clodum, SystemMode mode);

  const Clodum& clodum() const { return clodum_; }
  SystemMode mode() const { return mode_; }
  int start() const { return start_; }
  int end() const { return start_ + static_cast<int>(samples_.size()); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Scalar>& samples() const { return samples_; }
  Scalar fill() const;
  Scalar at(int t) const;

 private:
  Clodum clodum_;
  SystemMode mode_;
  int start_;
  std::vector<Scalar> samples_;
};

// Equality over the union of both windows, nulls included.
bool approx_equal(const Signal& f, const Signal& g);

// (f sup-conv g)(t) = V_k f(k) * g(t-k); both signals must be max-mode.
Signal sup_convolve(const Signal& f, const Signal& g);
// (f inf-conv g)(t) = /\_k f(k) *' g(t-k); both signals must be min-mode.
Signal inf_convolve(const Signal& f, const Signal& g);

struct Trajectory {
  std::vector<WVector> states;   // x(0..T)
  std::vector<WVector> outputs;  // y(0..T)
};

// Phi(t2, t1) = A(t2) ... A(t1+1); the identity of the mode when t2 == t1.
WMatrix transition_matrix(const SystemSpec& sys, int t2, int t1);

// Runs the recursion for t = 1..T. `inputs` holds u(1..T) (size T) or
// u(0..T) (size T+1, with u(0) required to be null).
Trajectory simulate(const SystemSpec& sys, const WVector& x0, const std::vector<WVector>& inputs, int horizon);

// Same trajectory evaluated from transition matrices:
//   x(t) = Phi(t,0) x(0) V  V_{k<=t} Phi(t,k) B(k) u(k),  y(t) = C(t) x(t) V D(t) u(t).
Trajectory simulate_closed_form(const SystemSpec& sys, const WVector& x0,
                                const std::vector<WVector>& inputs, int horizon);

// Output parts driven only by x(0) (null input) and only by u (null state).
std::vector<WVector> null_input_response(const SystemSpec& sys, const WVector& x0, int horizon);
std::vector<WVector> null_state_response(const SystemSpec& sys, const std::vector<WVector>& inputs,
                                         int horizon);

// h(0) = C B V D, h(t) = C A^(t) B for t = 1..T (dual products for min mode).
// Each entry is a q x p matrix. Requires constant matrices.
std::vector<WMatrix> impulse_response(const SystemSpec& sys, int horizon);
// SISO specialisation as a signal starting at t = 0.
Signal impulse_response_signal(const SystemSpec& sys, int horizon);

struct Periodicity {
  std::size_t k0;
  std::size_t period;
};

// Smallest period d <= max_period (then smallest k0 <= max_k0) such that
// h(k+d) == lambda^d * h(k) for every k >= k0 inside the window.
std::optional<Periodicity> detect_periodicity(const Signal& h, Scalar lambda, std::size_t max_period,
                                              std::size_t max_k0);
// The same test for one given period; returns the smallest k0.
std::optional<std::size_t> periodic_from(const Signal& h, Scalar lambda, std::size_t period,
                                         std::size_t max_k0);

// Block maxima of mu(h(k)) over consecutive blocks of `block` samples keep
// strictly increasing through the second half of the window.
bool magnitude_diverges(const Signal& h, std::size_t block);

struct StabilityReport {
  bool causal = true;
  // bibo_upper is evaluated for max systems, bibo_lower for min systems; the
  // other flag stays false.
  bool bibo_upper = false;
  bool bibo_lower = false;
  // Set only when the periodicity hypotheses hold: clog, no top entries,
  // irreducible A with some a_ii above the bottom, and a unique critical cycle.
  std::optional<bool> absolutely_stable;
  Scalar lambda = 0.0;
  Scalar dual_lambda = 0.0;
  // The eigenvalue sufficient condition (lambda <= e with top-free matrices,
  // or its dual) held, so the BIBO flag is proven rather than witnessed.
  bool eigenvalue_bound = false;
  // Heuristic witness of unbounded mu(h(k)) over the horizon.
  bool diverges = false;
  // sup of mu(h(t)) over the support of h within the horizon.
  Scalar m_h = 0.0;
  std::optional<Periodicity> periodicity;
  int horizon = 0;
};

// Horizon 0 selects max(4 n^2, 200).
StabilityReport check_causal_stable(const SystemSpec& sys, int horizon = 0);

struct ImpulseStability {
  bool causal = true;
  bool bibo_upper = false;
  bool bibo_lower = false;
  bool diverges = false;
  Scalar m_h = 0.0;
};

// Criteria read directly off an impulse response given on a finite window.
ImpulseStability check_impulse_response(const Signal& h);

}  // namespace wlsys
