#include "wlsys/state_space.hpp"

#include <algorithm>
#include <string>

#include "wlsys/error.hpp"
#include "wlsys/spectral.hpp"

namespace wlsys {

namespace {

// Mode-dependent lattice operations.
struct ModeOps {
  Clodum clodum;
  SystemMode mode;

  bool is_max() const { return mode == SystemMode::Max; }
  Scalar null() const { return is_max() ? clodum.bottom() : clodum.top(); }
  WMatrix mul(const WMatrix& a, const WMatrix& b) const { return is_max() ? maxmul(a, b) : minmul(a, b); }
  WVector mul(const WMatrix& a, const WVector& x) const { return is_max() ? maxmul(a, x) : minmul(a, x); }
  WVector combine(const WVector& x, const WVector& y) const { return is_max() ? join(x, y) : meet(x, y); }
  WMatrix combine(const WMatrix& x, const WMatrix& y) const { return is_max() ? join(x, y) : meet(x, y); }
  Scalar combine(Scalar x, Scalar y) const { return is_max() ? clodum.join(x, y) : clodum.meet(x, y); }
  Scalar times(Scalar x, Scalar y) const { return is_max() ? clodum.mult(x, y) : clodum.dual_mult(x, y); }
  Scalar unit() const { return is_max() ? clodum.unit() : clodum.dual_unit(); }
  WMatrix identity(std::size_t n) const {
    return is_max() ? WMatrix::identity(clodum, n) : WMatrix::dual_identity(clodum, n);
  }
  WMatrix power(const WMatrix& a, int t) const { return is_max() ? matrix_power(a, t) : dual_matrix_power(a, t); }
  WVector null_vector(std::size_t n) const { return WVector::filled(clodum, n, null()); }
};

ModeOps ops_of(const SystemSpec& sys) { return {sys.clodum(), sys.mode()}; }

// Normalises the caller's input list to u(0..T) with a null u(0).
std::vector<WVector> input_window(const SystemSpec& sys, const std::vector<WVector>& inputs, int horizon) {
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  const ModeOps ops = ops_of(sys);
  const auto T = static_cast<std::size_t>(horizon);
  std::vector<WVector> u;
  u.reserve(T + 1);
  if (inputs.size() == T) {
    u.push_back(ops.null_vector(sys.inputs()));
    u.insert(u.end(), inputs.begin(), inputs.end());
  } else if (inputs.size() == T + 1) {
    for (std::size_t i = 0; i < inputs[0].size(); ++i) {
      if (inputs[0][i] != ops.null()) {
        throw DomainError("u(0) must be null: the input is taken to start at t = 1");
      }
    }
    u = inputs;
  } else {
    throw DimensionError("expected " + std::to_string(T) + " or " + std::to_string(T + 1) +
                         " input vectors, got " + std::to_string(inputs.size()));
  }
  for (const auto& v : u) {
    require_same_clodum(sys.clodum(), v.clodum(), "simulate");
    if (v.size() != sys.inputs()) {
      throw DimensionError("input vector has " + std::to_string(v.size()) + " entries, expected " +
                           std::to_string(sys.inputs()));
    }
  }
  return u;
}

void require_state(const SystemSpec& sys, const WVector& x0) {
  require_same_clodum(sys.clodum(), x0.clodum(), "simulate");
  if (x0.size() != sys.states()) {
    throw DimensionError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                         std::to_string(sys.states()));
  }
}

void require_same_mode(const Signal& f, const Signal& g, SystemMode mode, const char* op) {
  require_same_clodum(f.clodum(), g.clodum(), op);
  if (f.mode() != mode || g.mode() != mode) {
    throw DomainError(std::string(op) + ": signals use the wrong null convention");
  }
}

// Block extrema of a scalar sequence keep moving strictly (upwards when
// `increasing`) through the second half of the sequence.
bool block_trend(const std::vector<Scalar>& v, std::size_t block, bool increasing, const Clodum& c) {
  if (block == 0) block = 1;
  std::vector<Scalar> ext;
  for (std::size_t s = 0; s + block <= v.size(); s += block) {
    Scalar e = v[s];
    for (std::size_t k = s; k < s + block; ++k) e = increasing ? std::max(e, v[k]) : std::min(e, v[k]);
    ext.push_back(e);
  }
  if (ext.size() < 4) return false;
  for (std::size_t j = ext.size() / 2; j + 1 < ext.size(); ++j) {
    const bool moves = increasing ? c.less(ext[j], ext[j + 1]) : c.less(ext[j + 1], ext[j]);
    if (!moves) return false;
  }
  return true;
}

std::vector<Scalar> support_magnitudes(const Signal& h) {
  const Clodum& c = h.clodum();
  std::vector<Scalar> mags;
  mags.reserve(h.size());
  for (Scalar v : h.samples()) mags.push_back(v == h.fill() ? c.unit() : c.magnitude(v));
  return mags;
}

Scalar support_sup_magnitude(const Signal& h) {
  const Clodum& c = h.clodum();
  Scalar m = c.bottom();
  bool any = false;
  for (Scalar v : h.samples()) {
    if (v == h.fill()) continue;
    m = any ? c.join(m, c.magnitude(v)) : c.magnitude(v);
    any = true;
  }
  return any ? m : c.unit();
}

}  // namespace

MatrixProvider::MatrixProvider(WMatrix constant)
    : constant_(std::move(constant)), rows_(constant_->rows()), cols_(constant_->cols()) {}

MatrixProvider::MatrixProvider(std::function<WMatrix(int)> at_time, std::size_t rows, std::size_t cols)
    : at_time_(std::move(at_time)), rows_(rows), cols_(cols) {
  if (!at_time_) throw ConfigError("time-varying matrix provider without a callback");
}

WMatrix MatrixProvider::at(int t) const {
  if (constant_) return *constant_;
  WMatrix m = at_time_(t);
  if (m.rows() != rows_ || m.cols() != cols_) {
    throw DimensionError("time-varying matrix at t=" + std::to_string(t) + " has shape " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", declared " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return m;
}

const WMatrix& MatrixProvider::constant() const {
  if (!constant_) throw UnsupportedOperation("matrix is time-varying");
  return *constant_;
}

SystemSpec::SystemSpec(Clodum clodum, SystemMode mode, MatrixProvider a, MatrixProvider b, MatrixProvider c,
                       MatrixProvider d)
    : clodum_(clodum), mode_(mode), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const std::size_t n = a_.rows();
  if (a_.cols() != n) throw DimensionError("A must be square");
  if (b_.rows() != n) throw DimensionError("B must have as many rows as A");
  if (c_.cols() != n) throw DimensionError("C must have as many columns as A");
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw DimensionError("D must be " + std::to_string(c_.rows()) + "x" + std::to_string(b_.cols()));
  }
  for (const MatrixProvider* p : {&a_, &b_, &c_, &d_}) {
    if (p->is_constant()) require_same_clodum(clodum_, p->constant().clodum(), "SystemSpec");
  }
}

SystemSpec SystemSpec::constant(SystemMode mode, WMatrix a, WMatrix b, WMatrix c, WMatrix d) {
  const Clodum clodum = a.clodum();
  return SystemSpec(clodum, mode, MatrixProvider(std::move(a)), MatrixProvider(std::move(b)),
                    MatrixProvider(std::move(c)), MatrixProvider(std::move(d)));
}

bool SystemSpec::is_constant() const {
  return a_.is_constant() && b_.is_constant() && c_.is_constant() && d_.is_constant();
}

Scalar SystemSpec::null_value() const { return mode_ == SystemMode::Max ? clodum_.bottom() : clodum_.top(); }

Signal::Signal(Clodum clodum, SystemMode mode, int start, std::vector<Scalar> samples)
    : clodum_(clodum), mode_(mode), start_(start), samples_(std::move(samples)) {
  for (Scalar v : samples_) clodum_.require(v);
}

Signal Signal::impulse(Clodum clodum, SystemMode mode) {
  return Signal(clodum, mode, 0, {mode == SystemMode::Max ? clodum.unit() : clodum.dual_unit()});
}

Scalar Signal::fill() const { return mode_ == SystemMode::Max ? clodum_.bottom() : clodum_.top(); }

Scalar Signal::at(int t) const {
  if (t < start_ || t >= end()) return fill();
  return samples_[static_cast<std::size_t>(t - start_)];
}

bool approx_equal(const Signal& f, const Signal& g) {
  if (!(f.clodum() == g.clodum()) || f.mode() != g.mode()) return false;
  const int lo = std::min(f.start(), g.start());
  const int hi = std::max(f.end(), g.end());
  for (int t = lo; t < hi; ++t)
    if (!f.clodum().equal(f.at(t), g.at(t))) return false;
  return true;
}

Signal sup_convolve(const Signal& f, const Signal& g) {
  require_same_mode(f, g, SystemMode::Max, "sup_convolve");
  const Clodum& c = f.clodum();
  if (f.size() == 0 || g.size() == 0) return Signal(c, SystemMode::Max, f.start() + g.start(), {});
  std::vector<Scalar> out(f.size() + g.size() - 1, c.bottom());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      out[i + j] = c.join(out[i + j], c.mult(f.samples()[i], g.samples()[j]));
  return Signal(c, SystemMode::Max, f.start() + g.start(), std::move(out));
}

Signal inf_convolve(const Signal& f, const Signal& g) {
  require_same_mode(f, g, SystemMode::Min, "inf_convolve");
  const Clodum& c = f.clodum();
  if (f.size() == 0 || g.size() == 0) return Signal(c, SystemMode::Min, f.start() + g.start(), {});
  std::vector<Scalar> out(f.size() + g.size() - 1, c.top());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      out[i + j] = c.meet(out[i + j], c.dual_mult(f.samples()[i], g.samples()[j]));
  return Signal(c, SystemMode::Min, f.start() + g.start(), std::move(out));
}

WMatrix transition_matrix(const SystemSpec& sys, int t2, int t1) {
  if (t2 < t1) {
    throw DomainError("transition_matrix: t2 = " + std::to_string(t2) + " precedes t1 = " + std::to_string(t1));
  }
  const ModeOps ops = ops_of(sys);
  WMatrix phi = ops.identity(sys.states());
  for (int t = t1 + 1; t <= t2; ++t) phi = ops.mul(sys.a(t), phi);
  return phi;
}

Trajectory simulate(const SystemSpec& sys, const WVector& x0, const std::vector<WVector>& inputs, int horizon) {
  require_state(sys, x0);
  const auto u = input_window(sys, inputs, horizon);
  const ModeOps ops = ops_of(sys);
  Trajectory tr;
  tr.states.reserve(u.size());
  tr.outputs.reserve(u.size());
  tr.states.push_back(x0);
  tr.outputs.push_back(ops.combine(ops.mul(sys.c(0), x0), ops.mul(sys.d(0), u[0])));
  for (int t = 1; t <= horizon; ++t) {
    const auto k = static_cast<std::size_t>(t);
    WVector x = ops.combine(ops.mul(sys.a(t), tr.states.back()), ops.mul(sys.b(t), u[k]));
    tr.outputs.push_back(ops.combine(ops.mul(sys.c(t), x), ops.mul(sys.d(t), u[k])));
    tr.states.push_back(std::move(x));
  }
  return tr;
}

Trajectory simulate_closed_form(const SystemSpec& sys, const WVector& x0, const std::vector<WVector>& inputs,
                                int horizon) {
  require_state(sys, x0);
  const auto u = input_window(sys, inputs, horizon);
  const ModeOps ops = ops_of(sys);
  const bool constant = sys.is_constant();
  auto phi = [&](int t2, int t1) {
    return constant ? ops.power(sys.a(0), t2 - t1) : transition_matrix(sys, t2, t1);
  };
  Trajectory tr;
  for (int t = 0; t <= horizon; ++t) {
    WVector x = ops.mul(phi(t, 0), x0);
    for (int k = 0; k <= t; ++k) {
      x = ops.combine(x, ops.mul(phi(t, k), ops.mul(sys.b(k), u[static_cast<std::size_t>(k)])));
    }
    tr.outputs.push_back(ops.combine(ops.mul(sys.c(t), x), ops.mul(sys.d(t), u[static_cast<std::size_t>(t)])));
    tr.states.push_back(std::move(x));
  }
  return tr;
}

std::vector<WVector> null_input_response(const SystemSpec& sys, const WVector& x0, int horizon) {
  const ModeOps ops = ops_of(sys);
  std::vector<WVector> u(static_cast<std::size_t>(std::max(horizon, 0)), ops.null_vector(sys.inputs()));
  return simulate(sys, x0, u, horizon).outputs;
}

std::vector<WVector> null_state_response(const SystemSpec& sys, const std::vector<WVector>& inputs, int horizon) {
  const ModeOps ops = ops_of(sys);
  return simulate(sys, ops.null_vector(sys.states()), inputs, horizon).outputs;
}

std::vector<WMatrix> impulse_response(const SystemSpec& sys, int horizon) {
  if (!sys.is_constant()) {
    throw UnsupportedOperation("impulse_response needs constant matrices; use simulate for time-varying systems");
  }
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  const ModeOps ops = ops_of(sys);
  const WMatrix a = sys.a(0);
  const WMatrix b = sys.b(0);
  const WMatrix c = sys.c(0);
  std::vector<WMatrix> h;
  h.reserve(static_cast<std::size_t>(horizon) + 1);
  h.push_back(ops.combine(ops.mul(c, b), sys.d(0)));
  WMatrix ab = b;  // A^(t) B
  for (int t = 1; t <= horizon; ++t) {
    ab = ops.mul(a, ab);
    h.push_back(ops.mul(c, ab));
  }
  return h;
}

Signal impulse_response_signal(const SystemSpec& sys, int horizon) {
  if (sys.inputs() != 1 || sys.outputs() != 1) {
    throw DimensionError("impulse_response_signal needs a single-input single-output system");
  }
  const auto h = impulse_response(sys, horizon);
  std::vector<Scalar> samples;
  samples.reserve(h.size());
  for (const auto& m : h) samples.push_back(m(0, 0));
  return Signal(sys.clodum(), sys.mode(), 0, std::move(samples));
}

std::optional<std::size_t> periodic_from(const Signal& h, Scalar lambda, std::size_t period, std::size_t max_k0) {
  if (period == 0 || h.size() <= period) return std::nullopt;
  const Clodum& c = h.clodum();
  const bool is_max = h.mode() == SystemMode::Max;
  const Scalar gain = is_max ? c.power(lambda, static_cast<int>(period)) : c.dual_power(lambda, static_cast<int>(period));
  const auto& s = h.samples();
  // Scan backwards for the last violation; k0 is one past it.
  std::size_t k0 = 0;
  for (std::size_t k = s.size() - period; k-- > 0;) {
    const Scalar expected = is_max ? c.mult(gain, s[k]) : c.dual_mult(gain, s[k]);
    if (!c.equal(s[k + period], expected)) {
      k0 = k + 1;
      break;
    }
  }
  // Require the relation to be confirmed over at least two full periods.
  if (k0 > max_k0 || k0 + 2 * period > s.size() - period) return std::nullopt;
  return k0;
}

std::optional<Periodicity> detect_periodicity(const Signal& h, Scalar lambda, std::size_t max_period,
                                              std::size_t max_k0) {
  for (std::size_t d = 1; d <= max_period; ++d) {
    if (auto k0 = periodic_from(h, lambda, d, max_k0)) return Periodicity{*k0, d};
  }
  return std::nullopt;
}

bool magnitude_diverges(const Signal& h, std::size_t block) {
  const Clodum& c = h.clodum();
  const auto mags = support_magnitudes(h);
  for (Scalar m : mags)
    if (c.is_top(m)) return true;
  return block_trend(mags, block, /*increasing=*/true, c);
}

ImpulseStability check_impulse_response(const Signal& h) {
  const Clodum& c = h.clodum();
  ImpulseStability r;
  for (int t = h.start(); t < 0 && t < h.end(); ++t)
    if (h.at(t) != h.fill()) r.causal = false;
  const std::size_t block = std::max<std::size_t>(1, h.size() / 16);
  r.diverges = magnitude_diverges(h, block);
  r.m_h = support_sup_magnitude(h);
  const auto& s = h.samples();
  if (h.mode() == SystemMode::Max) {
    const bool hits_top = std::any_of(s.begin(), s.end(), [&](Scalar v) { return c.is_top(v); });
    r.bibo_upper = !hits_top && !block_trend(s, block, true, c);
  } else {
    const bool hits_bottom = std::any_of(s.begin(), s.end(), [&](Scalar v) { return c.is_bottom(v); });
    r.bibo_lower = !hits_bottom && !block_trend(s, block, false, c);
  }
  return r;
}

StabilityReport check_causal_stable(const SystemSpec& sys, int horizon) {
  if (!sys.is_constant()) throw UnsupportedOperation("stability analysis needs constant matrices");
  const Clodum& c = sys.clodum();
  const ModeOps ops = ops_of(sys);
  const std::size_t n = sys.states();
  if (horizon <= 0) horizon = static_cast<int>(std::max<std::size_t>(4 * n * n, 200));

  const WMatrix a = sys.a(0);
  const std::vector<WMatrix> mats{a, sys.b(0), sys.c(0), sys.d(0)};
  const CycleMean cm = cycle_mean_eigenvalue(a);

  StabilityReport r;
  r.horizon = horizon;
  r.lambda = cm.lambda;
  r.dual_lambda = dual_cycle_mean(a);

  const auto h = impulse_response(sys, horizon);
  const std::size_t q = sys.outputs();
  const std::size_t p = sys.inputs();
  bool bounded = true;
  bool any_support = false;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<Scalar> samples;
      samples.reserve(h.size());
      for (const auto& m : h) samples.push_back(m(i, j));
      const Signal entry(c, sys.mode(), 0, samples);
      const ImpulseStability es = check_impulse_response(entry);
      r.diverges = r.diverges || magnitude_diverges(entry, n);
      bounded = bounded && (ops.is_max() ? es.bibo_upper : es.bibo_lower);
      const bool has_support =
          std::any_of(samples.begin(), samples.end(), [&](Scalar v) { return v != entry.fill(); });
      if (has_support) {
        r.m_h = any_support ? c.join(r.m_h, es.m_h) : es.m_h;
        any_support = true;
      }
      if (q == 1 && p == 1 && !c.is_bottom(cm.lambda) && !c.is_top(cm.lambda) && ops.is_max()) {
        r.periodicity = detect_periodicity(entry, cm.lambda, n, std::min<std::size_t>(n * n, h.size() / 2));
      }
    }
  }
  if (!any_support) r.m_h = c.unit();

  if (ops.is_max()) {
    const bool top_free = std::none_of(mats.begin(), mats.end(), [](const WMatrix& m) { return m.contains_top(); });
    r.eigenvalue_bound = top_free && c.leq(cm.lambda, c.unit());
    r.bibo_upper = r.eigenvalue_bound || bounded;

    bool diagonal = false;
    for (std::size_t i = 0; i < n; ++i) diagonal = diagonal || !c.is_bottom(a(i, i));
    const bool hypotheses = c.is_clog() && top_free && is_irreducible(a) && diagonal &&
                            cm.critical_count == 1 && !c.is_bottom(cm.lambda) && !c.is_top(cm.lambda);
    if (hypotheses) r.absolutely_stable = c.equal(cm.lambda, c.unit());
  } else {
    const bool bottom_free =
        std::none_of(mats.begin(), mats.end(), [](const WMatrix& m) { return m.contains_bottom(); });
    r.eigenvalue_bound = bottom_free && c.leq(c.dual_unit(), r.dual_lambda);
    r.bibo_lower = r.eigenvalue_bound || bounded;
  }
  return r;
}

}  // namespace wlsys
