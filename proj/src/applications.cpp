#include "wlsys/applications.hpp"

#include <cmath>
#include <string>

#include "wlsys/error.hpp"

namespace wlsys {

// ---------------------------------------------------------------------------
// Filters

namespace {

void validate_filter(const FilterSpec& f) {
  for (Scalar v : f.a) f.clodum.require(v);
  for (Scalar v : f.b) f.clodum.require(v);
  const Scalar null = f.mode == SystemMode::Max ? f.clodum.bottom() : f.clodum.top();
  bool any = false;
  for (Scalar v : f.a) any = any || v != null;
  for (Scalar v : f.b) any = any || v != null;
  if (!any) throw ConfigError("filter has only null coefficients");
}

}  // namespace

SystemSpec filter_to_state_space(const FilterSpec& f) {
  validate_filter(f);
  const std::size_t n = f.order();
  if (n == 0) throw ConfigError("filter needs at least one feedback coefficient");
  if (f.b.size() > 1) {
    throw UnsupportedOperation("state-space form needs m = 0; use filter_response for feedforward taps");
  }
  const Clodum& c = f.clodum;
  const bool max_mode = f.mode == SystemMode::Max;
  const Scalar null = max_mode ? c.bottom() : c.top();
  const Scalar unit = max_mode ? c.unit() : c.dual_unit();
  const Scalar b0 = f.b.empty() ? null : f.b[0];

  WMatrix a = WMatrix::filled(c, n, n, null);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = unit;
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = f.a[n - 1 - j];
  WMatrix b = WMatrix::filled(c, n, 1, null);
  b(n - 1, 0) = b0;
  WMatrix cm = WMatrix::filled(c, 1, n, null);
  cm(0, n - 1) = unit;
  WMatrix d = WMatrix::filled(c, 1, 1, null);
  return SystemSpec::constant(f.mode, std::move(a), std::move(b), std::move(cm), std::move(d));
}

std::vector<Scalar> filter_response(const FilterSpec& f, const std::vector<Scalar>& inputs) {
  validate_filter(f);
  const Clodum& c = f.clodum;
  const bool max_mode = f.mode == SystemMode::Max;
  const Scalar null = max_mode ? c.bottom() : c.top();
  auto mul = [&](Scalar x, Scalar y) { return max_mode ? c.mult(x, y) : c.dual_mult(x, y); };
  auto comb = [&](Scalar x, Scalar y) { return max_mode ? c.join(x, y) : c.meet(x, y); };
  for (Scalar v : inputs) c.require(v);

  const std::size_t T = inputs.size();
  auto u = [&](std::ptrdiff_t t) { return t >= 1 ? inputs[static_cast<std::size_t>(t - 1)] : null; };
  std::vector<Scalar> y(T + 1, null);
  for (std::size_t t = 0; t <= T; ++t) {
    const auto ts = static_cast<std::ptrdiff_t>(t);
    Scalar acc = null;
    for (std::size_t i = 1; i <= f.a.size(); ++i) {
      if (i <= t) acc = comb(acc, mul(f.a[i - 1], y[t - i]));
    }
    for (std::size_t j = 0; j < f.b.size(); ++j) acc = comb(acc, mul(f.b[j], u(ts - static_cast<std::ptrdiff_t>(j))));
    y[t] = acc;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Distance transform

DistanceResult distance_transform(const GridField& g, std::size_t max_passes) {
  if (g.rows == 0 || g.cols == 0) throw DomainError("distance_transform: empty grid");
  if (!(g.step_a > 0) || !(g.step_b > 0) || std::isinf(g.step_a) || std::isinf(g.step_b)) {
    throw DomainError("distance_transform: local steps must be positive and finite");
  }
  const Clodum mp(ClodumKind::MaxPlus);
  const Scalar inf = mp.top();
  const std::size_t M = g.rows;
  const std::size_t N = g.cols;
  auto index = [&](const std::pair<std::size_t, std::size_t>& rc, const char* what) {
    if (rc.first >= M || rc.second >= N) {
      throw DomainError(std::string("distance_transform: ") + what + " (" + std::to_string(rc.first) + "," +
                        std::to_string(rc.second) + ") lies outside the grid");
    }
    return rc.first * N + rc.second;
  };

  std::vector<bool> wall(M * N, false);
  for (const auto& w : g.obstacles) wall[index(w, "obstacle")] = true;
  std::vector<Scalar> field(M * N, inf);
  for (const auto& s : g.sources) {
    const std::size_t k = index(s, "source");
    if (wall[k]) throw DomainError("distance_transform: a cell is both a source and an obstacle");
    field[k] = 0.0;
  }

  DistanceResult r;
  r.empty_sources = g.sources.empty();

  auto at = [&](const std::vector<Scalar>& y, std::ptrdiff_t i, std::ptrdiff_t j) {
    if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(M) || j >= static_cast<std::ptrdiff_t>(N)) return inf;
    return y[static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j)];
  };

  for (std::size_t pass = 1; pass <= max_passes; ++pass) {
    const bool forward = pass % 2 == 1;
    std::vector<Scalar> y = field;
    const std::ptrdiff_t dir = forward ? -1 : 1;  // neighbours already visited lie on this side
    for (std::size_t s = 0; s < M * N; ++s) {
      const std::size_t k = forward ? s : M * N - 1 - s;
      if (wall[k]) {
        y[k] = inf;
        continue;
      }
      const auto i = static_cast<std::ptrdiff_t>(k / N);
      const auto j = static_cast<std::ptrdiff_t>(k % N);
      Scalar v = y[k];
      v = mp.meet(v, mp.dual_mult(at(y, i + dir, j - 1), g.step_b));
      v = mp.meet(v, mp.dual_mult(at(y, i + dir, j), g.step_a));
      v = mp.meet(v, mp.dual_mult(at(y, i + dir, j + 1), g.step_b));
      v = mp.meet(v, mp.dual_mult(at(y, i, j + dir), g.step_a));
      y[k] = v;
    }
    const bool changed = y != field;
    field = std::move(y);
    r.history.push_back(field);
    r.passes_used = pass;
    // Each half-mask pass is idempotent, so an unchanged pass proves a fixed
    // point only once the opposite pass has also run.
    if (!changed && pass >= 2) {
      r.converged = true;
      break;
    }
  }
  r.field = std::move(field);
  return r;
}

// ---------------------------------------------------------------------------
// Viterbi and saliency

namespace {

void validate_hmm(const HmmSpec& h, std::size_t horizon) {
  const std::size_t n = h.states();
  if (!h.a.is_square()) throw DimensionError("transition matrix must be square");
  if (h.pi.size() != n) throw DimensionError("initial distribution has the wrong length");
  if (h.p.size() < horizon + 1) {
    throw DimensionError("likelihood table has " + std::to_string(h.p.size()) + " rows, need " +
                         std::to_string(horizon + 1));
  }
  auto unit_interval = [](Scalar v) { return v >= 0.0 && v <= 1.0; };
  for (Scalar v : h.a.values())
    if (!unit_interval(v)) throw DomainError("transition probabilities must lie in [0,1]");
  for (Scalar v : h.pi)
    if (!unit_interval(v)) throw DomainError("initial probabilities must lie in [0,1]");
  for (const auto& row : h.p) {
    if (row.size() != n) throw DimensionError("likelihood row has the wrong length");
    for (Scalar v : row)
      if (!unit_interval(v)) throw DomainError("likelihoods must lie in [0,1]");
  }
}

// Greatest entry, smallest index on ties.
std::size_t argmax(const std::vector<Scalar>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

ViterbiResult viterbi(const HmmSpec& h, std::size_t horizon) {
  validate_hmm(h, horizon);
  const Clodum c(ClodumKind::ProductTNorm);
  const std::size_t n = h.states();
  std::vector<std::vector<Scalar>> x(horizon + 1, std::vector<Scalar>(n));
  std::vector<std::vector<std::size_t>> back(horizon + 1, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) x[0][i] = c.mult(h.pi[i], h.p[0][i]);
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      Scalar best_v = c.mult(h.a(0, i), x[t - 1][0]);
      for (std::size_t j = 1; j < n; ++j) {
        const Scalar v = c.mult(h.a(j, i), x[t - 1][j]);
        if (v > best_v) {
          best_v = v;
          best = j;
        }
      }
      x[t][i] = c.mult(best_v, h.p[t][i]);
      back[t][i] = best;
    }
  }

  ViterbiResult r;
  r.path.assign(horizon + 1, 0);
  r.path[horizon] = argmax(x[horizon]);
  for (std::size_t t = horizon; t > 0; --t) r.path[t - 1] = back[t][r.path[t]];
  r.score = x[horizon][r.path[horizon]];
  for (const auto& row : x) {
    r.trajectory.states.emplace_back(c, row);
    r.trajectory.outputs.push_back(WVector(c, {row[argmax(row)]}));
  }
  return r;
}

LogViterbiResult viterbi_log_domain(const HmmSpec& h, std::size_t horizon) {
  validate_hmm(h, horizon);
  const Clodum c(ClodumKind::MaxPlus);
  auto lg = [&](Scalar v) { return v == 0.0 ? c.bottom() : std::log(v); };
  const std::size_t n = h.states();
  std::vector<std::vector<Scalar>> x(horizon + 1, std::vector<Scalar>(n));
  std::vector<std::vector<std::size_t>> back(horizon + 1, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) x[0][i] = c.mult(lg(h.pi[i]), lg(h.p[0][i]));
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      Scalar best_v = c.mult(lg(h.a(0, i)), x[t - 1][0]);
      for (std::size_t j = 1; j < n; ++j) {
        const Scalar v = c.mult(lg(h.a(j, i)), x[t - 1][j]);
        if (v > best_v) {
          best_v = v;
          best = j;
        }
      }
      x[t][i] = c.mult(best_v, lg(h.p[t][i]));
      back[t][i] = best;
    }
  }
  LogViterbiResult r;
  r.path.assign(horizon + 1, 0);
  r.path[horizon] = argmax(x[horizon]);
  for (std::size_t t = horizon; t > 0; --t) r.path[t - 1] = back[t][r.path[t]];
  r.log_score = x[horizon][r.path[horizon]];
  return r;
}

SystemSpec viterbi_system(const HmmSpec& h) {
  validate_hmm(h, h.steps());
  const Clodum c(ClodumKind::ProductTNorm);
  const std::size_t n = h.states();
  const WMatrix a = h.a;
  const auto p = h.p;
  auto a_t = [c, a, p, n](int t) {
    if (t < 0 || static_cast<std::size_t>(t) >= p.size()) {
      throw DomainError("no likelihoods for t = " + std::to_string(t));
    }
    WMatrix m = WMatrix::bottoms(c, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = c.mult(a(j, i), p[static_cast<std::size_t>(t)][i]);
    return m;
  };
  return SystemSpec(c, SystemMode::Max, MatrixProvider(a_t, n, n), MatrixProvider(WMatrix::bottoms(c, n, 1)),
                    MatrixProvider(WMatrix::filled(c, 1, n, c.unit())), MatrixProvider(WMatrix::bottoms(c, 1, 1)));
}

WVector viterbi_initial_state(const HmmSpec& h) {
  validate_hmm(h, 0);
  const Clodum c(ClodumKind::ProductTNorm);
  std::vector<Scalar> x(h.states());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c.mult(h.pi[i], h.p[0][i]);
  return WVector(c, std::move(x));
}

namespace {

Clodum saliency_clodum(const HmmSpec& h) {
  if (h.star != ClodumKind::ProductTNorm && h.star != ClodumKind::MaxMin) {
    throw ConfigError("saliency multiplication must be the product or the minimum");
  }
  return Clodum(h.star);
}

const std::vector<Scalar>& input_row(const HmmSpec& h, std::size_t t) {
  if (t >= h.u.size()) throw DimensionError("no control input for t = " + std::to_string(t));
  if (h.b && h.u[t].size() != h.b->cols()) throw DimensionError("control input row has the wrong length");
  return h.u[t];
}

}  // namespace

WVector controlled_saliency_step(const HmmSpec& h, const WVector& x_prev, std::size_t t) {
  const Clodum c = saliency_clodum(h);
  const std::size_t n = h.states();
  if (x_prev.size() != n) throw DimensionError("saliency state has the wrong length");
  if (t >= h.p.size() || h.p[t].size() != n) throw DimensionError("no likelihoods for t = " + std::to_string(t));
  std::vector<Scalar> x(n, c.bottom());
  for (std::size_t i = 0; i < n; ++i) {
    Scalar acc = c.bottom();
    for (std::size_t j = 0; j < n; ++j) acc = c.join(acc, c.mult(h.a(j, i), x_prev[j]));
    x[i] = c.mult(acc, h.p[t][i]);
  }
  if (h.b) {
    if (h.b->rows() != n) throw DimensionError("control matrix has the wrong number of rows");
    const auto& u = input_row(h, t);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < u.size(); ++j) x[i] = c.join(x[i], c.mult((*h.b)(i, j), u[j]));
  }
  return WVector(c, std::move(x));
}

Scalar saliency_output(const HmmSpec& h, const WVector& x, std::size_t t) {
  const Clodum c = saliency_clodum(h);
  if (!h.c.empty() && h.c.size() != x.size()) throw DimensionError("output weights have the wrong length");
  Scalar y = c.bottom();
  for (std::size_t i = 0; i < x.size(); ++i) y = c.join(y, c.mult(h.c.empty() ? c.unit() : h.c[i], x[i]));
  if (!h.d.empty()) {
    const auto& u = input_row(h, t);
    if (u.size() != h.d.size()) throw DimensionError("input weights have the wrong length");
    for (std::size_t j = 0; j < u.size(); ++j) y = c.join(y, c.mult(h.d[j], u[j]));
  }
  return y;
}

// ---------------------------------------------------------------------------
// Fuzzy Markov chains

FmcSpec fmc_from_transition(const WMatrix& p) { return FmcSpec{p.transpose()}; }

FmcAnalysis fmc_analyze(const FmcSpec& f, std::size_t max_powers) {
  const WMatrix& a = f.a;
  const Clodum& c = a.clodum();
  if (!a.is_square()) throw DimensionError("FMC matrix must be square");
  if (c.kind() != ClodumKind::MaxMin && c.kind() != ClodumKind::ProductTNorm) {
    throw ConfigError("FMC analysis needs the max-min or product t-norm clodum");
  }
  const std::size_t n = a.rows();
  FmcAnalysis r;
  r.powers.push_back(a);
  for (std::size_t s = 2; s <= max_powers && !r.converged; ++s) {
    r.powers.push_back(maxmul(a, r.powers.back()));
    for (std::size_t k = 1; k < s; ++k) {
      if (approx_equal(r.powers[k - 1], r.powers.back())) {
        r.tau = k;
        r.period = s - k;
        r.converged = true;
        break;
      }
    }
  }

  r.unit_diagonal = true;
  for (std::size_t i = 0; i < n; ++i) r.unit_diagonal = r.unit_diagonal && c.equal(a(i, i), c.unit());
  const MetricMatrix gm = metric_matrix(a);
  if (gm.converged) r.metric_matrix = gm.matrix;

  std::optional<WMatrix> source;
  if (r.unit_diagonal && r.metric_matrix) {
    source = *r.metric_matrix;
  } else if (r.converged && r.period == 1) {
    source = r.powers[r.tau - 1];
  }
  if (source) {
    for (std::size_t j = 0; j < n; ++j) {
      WVector col = source->column(j);
      if (eigen_check(a, col, c.unit())) r.stationary.push_back(std::move(col));
    }
  }
  if (r.converged && r.period == 1) {
    const WMatrix& lim = r.powers[r.tau - 1];
    r.ergodic = true;
    for (std::size_t j = 1; j < n; ++j) r.ergodic = r.ergodic && approx_equal(lim.column(j), lim.column(0));
  }
  return r;
}

}  // namespace wlsys
