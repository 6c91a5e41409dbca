#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "wlsys/applications.hpp"
#include "wlsys/error.hpp"

using namespace wlsys;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
const Clodum mp(ClodumKind::MaxPlus);
const Clodum prod(ClodumKind::ProductTNorm);
const Clodum mm(ClodumKind::MaxMin);

bool close(double x, double y, double tol = 1e-9) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::fabs(x - y) <= tol * (1.0 + std::max(std::fabs(x), std::fabs(y)));
}

HmmSpec random_hmm(std::size_t n, std::size_t T, testsupport::Rng& rng, double zero_p = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] { return u(rng) < zero_p ? 0.0 : u(rng); };
  HmmSpec h;
  h.a = WMatrix::bottoms(prod, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h.a(i, j) = draw();
  h.pi.resize(n);
  for (auto& x : h.pi) x = draw();
  h.p.assign(T + 1, std::vector<Scalar>(n));
  for (auto& row : h.p)
    for (auto& x : row) x = draw();
  return h;
}

oracle::Grid grid_of(const WMatrix& m) {
  oracle::Grid g(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}
}  // namespace

// ---------------------------------------------------------------------------
// Filters

TEST_CASE("filter eigenvalue is the largest coefficient mean") {
  testsupport::Rng rng(91);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    const std::size_t order = 1 + static_cast<std::size_t>(n % 11);
    FilterSpec f;
    f.a.resize(order);
    for (auto& x : f.a) x = coef(rng);
    f.b = {0.0};
    double expect = -inf;
    for (std::size_t k = 0; k < order; ++k) expect = std::max(expect, f.a[k] / static_cast<double>(k + 1));
    CHECK(close(cycle_mean_eigenvalue(filter_to_state_space(f).a(0)).lambda, expect));
  }
}

TEST_CASE("direct recursion matches the state-space realization") {
  testsupport::Rng rng(92);
  std::uniform_real_distribution<double> coef(-1.0, 0.5);
  std::uniform_real_distribution<double> sig(-3.0, 3.0);
  for (SystemMode mode : {SystemMode::Max, SystemMode::Min}) {
    for (int n = 0; n < 20; ++n) {
      FilterSpec f;
      f.mode = mode;
      f.a.resize(1 + static_cast<std::size_t>(n % 6));
      for (auto& x : f.a) x = coef(rng);
      if (n % 3 == 0) f.a[0] = mode == SystemMode::Max ? -inf : inf;
      f.b = {coef(rng)};
      std::vector<Scalar> u(100);
      for (auto& x : u) x = sig(rng);
      const std::vector<Scalar> direct = filter_response(f, u);
      const SystemSpec sys = filter_to_state_space(f);
      std::vector<WVector> uv;
      for (Scalar x : u) uv.push_back(WVector(mp, {x}));
      const Trajectory tr = simulate(sys, WVector::filled(mp, f.order(), sys.null_value()), uv, 100);
      REQUIRE(direct.size() == 101);
      for (std::size_t t = 0; t <= 100; ++t) CHECK(close(direct[t], tr.outputs[t][0]));
    }
  }
}

TEST_CASE("filters with feedforward taps have no state-space form") {
  FilterSpec f;
  f.a = {-1};
  f.b = {0, -1};
  CHECK_THROWS_AS(filter_to_state_space(f), UnsupportedOperation);
  // y(t) = max(y(t-1) - 1, u(t), u(t-1) - 1)
  const auto y = filter_response(f, {0, -5, -5});
  CHECK(y == std::vector<Scalar>{-inf, 0, -1, -2});
}

TEST_CASE("envelope detector") {
  FilterSpec f;
  f.a = {-0.008};
  f.b = {0.0};
  const auto y = filter_response(f, {1.0, 0.0, 0.0, 2.0});
  CHECK(close(y[1], 1.0));
  CHECK(close(y[2], 0.992));
  CHECK(close(y[3], 0.984));
  CHECK(close(y[4], 2.0));
}

// ---------------------------------------------------------------------------
// Distance transform

TEST_CASE("one-dimensional distance transform") {
  GridField g;
  g.rows = 1;
  g.cols = 12;
  g.sources = {{0, 1}, {0, 5}, {0, 11}};
  const DistanceResult r = distance_transform(g);
  REQUIRE(r.history.size() >= 2);
  CHECK(r.history[0] == std::vector<Scalar>{inf, 0, 1, 2, 3, 0, 1, 2, 3, 4, 5, 0});
  CHECK(r.history[1] == std::vector<Scalar>{1, 0, 1, 2, 1, 0, 1, 2, 3, 2, 1, 0});
  CHECK(r.field == r.history[1]);
  CHECK(r.converged);
}

TEST_CASE("every pixel a source") {
  GridField g;
  g.rows = 4;
  g.cols = 5;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) g.sources.push_back({i, j});
  const DistanceResult r = distance_transform(g);
  CHECK(r.history[0] == std::vector<Scalar>(20, 0.0));
  CHECK(r.passes_used == 2);
  CHECK(r.field == std::vector<Scalar>(20, 0.0));
}

TEST_CASE("empty source set") {
  GridField g;
  g.rows = 3;
  g.cols = 3;
  const DistanceResult r = distance_transform(g);
  CHECK(r.empty_sources);
  CHECK(r.field == std::vector<Scalar>(9, inf));
}

TEST_CASE("two passes equal brute-force chamfer minimisation") {
  testsupport::Rng rng(93);
  const double a = 24.0 / 25.0, b = 34.0 / 25.0;
  for (int n = 0; n < 100; ++n) {
    GridField g;
    g.rows = g.cols = 10;
    g.step_a = a;
    g.step_b = b;
    const int count = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int s = 0; s < count; ++s)
      g.sources.push_back({static_cast<std::size_t>(rng() % 10), static_cast<std::size_t>(rng() % 10)});
    const DistanceResult r = distance_transform(g, 2);
    const auto expect = oracle::brute_chamfer(10, 10, g.sources, a, b);
    for (std::size_t k = 0; k < 100; ++k) CHECK(close(r.field[k], expect[k]));
  }
}

TEST_CASE("obstacles agree with shortest paths around walls") {
  testsupport::Rng rng(94);
  for (int n = 0; n < 50; ++n) {
    GridField g;
    g.rows = 8;
    g.cols = 9;
    std::vector<bool> wall(72, false);
    for (std::size_t k = 0; k < 72; ++k)
      if (rng() % 4 == 0) wall[k] = true;
    std::size_t src = rng() % 72;
    wall[src] = false;
    g.sources = {{src / 9, src % 9}};
    for (std::size_t k = 0; k < 72; ++k)
      if (wall[k]) g.obstacles.push_back({k / 9, k % 9});
    const DistanceResult r = distance_transform(g, 200);
    CHECK(r.converged);
    const auto expect = oracle::dijkstra_grid(8, 9, g.sources, wall, 1.0, 1.0);
    for (std::size_t k = 0; k < 72; ++k) CHECK(close(r.field[k], wall[k] ? inf : expect[k]));

    // Anti-extensive on the indicator and idempotent once converged.
    for (std::size_t k = 0; k < 72; ++k) CHECK(r.field[k] <= (k == src ? 0.0 : inf));
    const DistanceResult again = distance_transform(g, r.passes_used + 2);
    CHECK(again.field == r.field);
  }
}

TEST_CASE("sources must be free cells inside the grid") {
  GridField g;
  g.rows = 2;
  g.cols = 2;
  g.sources = {{0, 0}};
  g.obstacles = {{0, 0}};
  CHECK_THROWS_AS(distance_transform(g), DomainError);
  g.obstacles.clear();
  g.sources = {{2, 0}};
  CHECK_THROWS_AS(distance_transform(g), DomainError);
}

// ---------------------------------------------------------------------------
// Viterbi

TEST_CASE("single-state chain") {
  HmmSpec h;
  h.a = WMatrix(prod, {{0.9}});
  h.pi = {0.5};
  h.p = {{0.5}, {0.4}, {0.2}};
  const ViterbiResult r = viterbi(h, 2);
  CHECK(close(r.score, 0.5 * 0.5 * 0.9 * 0.4 * 0.9 * 0.2));
  CHECK(r.path == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("Viterbi equals exhaustive path search") {
  testsupport::Rng rng(95);
  int cases = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t T = 0; T <= 6; ++T)
      for (int k = 0; k < 5; ++k) {
        const HmmSpec h = random_hmm(n, T, rng);
        const ViterbiResult r = viterbi(h, T);
        const oracle::PathScore o = oracle::brute_viterbi(grid_of(h.a), h.pi, h.p, T);
        CHECK(close(r.score, o.score, 1e-12));
        CHECK(r.path == o.path);
        ++cases;
      }
  CHECK(cases >= 100);
}

TEST_CASE("deterministic chain follows the permutation") {
  HmmSpec h;
  h.a = WMatrix(prod, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  h.pi = {0.2, 0.7, 0.1};
  h.p.assign(6, {1.0, 1.0, 1.0});
  const ViterbiResult r = viterbi(h, 5);
  CHECK(r.path == std::vector<std::size_t>{1, 2, 0, 1, 2, 0});
  CHECK(close(r.score, 0.7));
}

TEST_CASE("log-domain Viterbi is isomorphic") {
  testsupport::Rng rng(96);
  for (int k = 0; k < 150; ++k) {
    const HmmSpec h = random_hmm(1 + static_cast<std::size_t>(k % 4), static_cast<std::size_t>(k % 7), rng, 0.15);
    const ViterbiResult r = viterbi(h, h.steps());
    const LogViterbiResult l = viterbi_log_domain(h, h.steps());
    if (r.score == 0.0) {
      CHECK(l.log_score == -inf);
    } else {
      CHECK(std::fabs(std::log(r.score) - l.log_score) <= 1e-7);
      CHECK(l.path == r.path);
    }
  }
}

TEST_CASE("Viterbi as a time-varying max-product system") {
  testsupport::Rng rng(97);
  for (int k = 0; k < 50; ++k) {
    const HmmSpec h = random_hmm(3, 5, rng);
    const ViterbiResult r = viterbi(h, 5);
    const Trajectory tr = simulate(viterbi_system(h), viterbi_initial_state(h), {}, 0);
    const SystemSpec sys = viterbi_system(h);
    const Trajectory full =
        simulate(sys, viterbi_initial_state(h), std::vector<WVector>(5, WVector::bottoms(prod, 1)), 5);
    CHECK(close(full.outputs[5][0], r.score, 1e-12));
    for (std::size_t t = 0; t <= 5; ++t) CHECK(approx_equal(full.states[t], r.trajectory.states[t]));
    CHECK(tr.states.size() == 1);
  }
}

// ---------------------------------------------------------------------------
// Controlled saliency

TEST_CASE("null control reduces to the Viterbi recursion") {
  testsupport::Rng rng(98);
  for (int k = 0; k < 50; ++k) {
    HmmSpec h = random_hmm(3, 6, rng);
    h.b = WMatrix::bottoms(prod, 3, 2);
    h.u.assign(7, {0.0, 0.0});
    WVector x = viterbi_initial_state(h);
    for (std::size_t t = 1; t <= 6; ++t) x = controlled_saliency_step(h, x, t);
    CHECK(close(saliency_output(h, x, 6), viterbi(h, 6).score, 1e-12));
  }
}

TEST_CASE("saturating control") {
  testsupport::Rng rng(99);
  for (ClodumKind star : {ClodumKind::ProductTNorm, ClodumKind::MaxMin}) {
    HmmSpec h = random_hmm(4, 3, rng);
    h.star = star;
    h.b = WMatrix::bottoms(prod, 4, 2);
    (*h.b)(2, 1) = 1.0;
    h.u.assign(4, {0.3, 0.0});
    h.u[2][1] = 1.0;
    WVector x = viterbi_initial_state(h);
    for (std::size_t t = 1; t <= 3; ++t) {
      x = controlled_saliency_step(h, x, t);
      if (t == 2) CHECK(x[2] == 1.0);
    }
  }
}

TEST_CASE("iterated saliency steps equal state-space simulation") {
  testsupport::Rng rng(100);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (ClodumKind star : {ClodumKind::ProductTNorm, ClodumKind::MaxMin}) {
    const Clodum c(star);
    for (int k = 0; k < 20; ++k) {
      const std::size_t n = 4, m = 2, T = 10;
      HmmSpec h = random_hmm(n, T, rng);
      h.star = star;
      h.b = WMatrix::bottoms(c, n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) (*h.b)(i, j) = u01(rng);
      h.u.assign(T + 1, std::vector<Scalar>(m));
      for (auto& row : h.u)
        for (auto& x : row) x = u01(rng);
      h.c = {u01(rng), u01(rng), u01(rng), u01(rng)};
      h.d = {u01(rng), u01(rng)};

      const WMatrix a = h.a;
      const auto p = h.p;
      auto a_t = [=](int t) {
        WMatrix out = WMatrix::bottoms(c, n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) out(i, j) = c.mult(a(j, i), p[static_cast<std::size_t>(t)][i]);
        return out;
      };
      WMatrix cm = WMatrix::bottoms(c, 1, n), dm = WMatrix::bottoms(c, 1, m);
      for (std::size_t i = 0; i < n; ++i) cm(0, i) = h.c[i];
      for (std::size_t j = 0; j < m; ++j) dm(0, j) = h.d[j];
      WMatrix bm = WMatrix::bottoms(c, n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) bm(i, j) = (*h.b)(i, j);
      const SystemSpec sys(c, SystemMode::Max, MatrixProvider(a_t, n, n), MatrixProvider(bm), MatrixProvider(cm),
                           MatrixProvider(dm));
      std::vector<WVector> inputs;
      for (std::size_t t = 1; t <= T; ++t) inputs.push_back(WVector(c, h.u[t]));
      std::vector<Scalar> x0(n);
      for (std::size_t i = 0; i < n; ++i) x0[i] = c.mult(h.pi[i], h.p[0][i]);
      const Trajectory tr = simulate(sys, WVector(c, x0), inputs, static_cast<int>(T));

      WVector x(c, x0);
      for (std::size_t t = 1; t <= T; ++t) {
        x = controlled_saliency_step(h, x, t);
        CHECK(approx_equal(x, tr.states[t]));
        CHECK(close(saliency_output(h, x, t), tr.outputs[t][0]));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Fuzzy Markov chains

TEST_CASE("fuzzy Markov chain example") {
  const FmcAnalysis r = fmc_analyze(FmcSpec{WMatrix(mm, {{1, 0.4, 0}, {0.3, 1, 0.5}, {0.7, 0.2, 1}})});
  const WMatrix gamma(mm, {{1, 0.4, 0.4}, {0.5, 1, 0.5}, {0.7, 0.4, 1}});
  REQUIRE(r.powers.size() >= 3);
  CHECK(r.powers[1] == gamma);
  CHECK(r.powers[2] == gamma);
  REQUIRE(r.metric_matrix.has_value());
  CHECK(*r.metric_matrix == gamma);
  CHECK(r.tau == 2);
  CHECK(r.period == 1);
  CHECK(r.unit_diagonal);
  CHECK_FALSE(r.ergodic);
  const WVector v(mm, {1, 0.5, 0.7});
  CHECK(maxmul(WMatrix(mm, {{1, 0.4, 0}, {0.3, 1, 0.5}, {0.7, 0.2, 1}}), v) == v);
  CHECK(std::find(r.stationary.begin(), r.stationary.end(), v) != r.stationary.end());
}

TEST_CASE("identity chain") {
  const FmcAnalysis r = fmc_analyze(FmcSpec{WMatrix::identity(mm, 3)});
  CHECK(r.tau == 1);
  CHECK(r.period == 1);
  CHECK(r.stationary.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    WVector e = WVector::bottoms(mm, 3);
    e[i] = 1.0;
    CHECK(std::find(r.stationary.begin(), r.stationary.end(), e) != r.stationary.end());
  }
}

TEST_CASE("unit-diagonal max-min powers are monotone and settle by n") {
  testsupport::Rng rng(101);
  for (int k = 0; k < 100; ++k) {
    WMatrix a = testsupport::random_matrix(mm, 4, 4, rng, 0.0);
    for (std::size_t i = 0; i < 4; ++i) a(i, i) = 1.0;
    for (int t = 1; t < 6; ++t) CHECK(leq(matrix_power(a, t), matrix_power(a, t + 1)));
    CHECK(matrix_power(a, 4) == matrix_power(a, 5));
    const FmcAnalysis r = fmc_analyze(FmcSpec{a});
    CHECK(r.converged);
    CHECK(r.tau <= 4);
    CHECK(r.period == 1);
  }
}

TEST_CASE("periodic fuzzy chain") {
  const FmcAnalysis r = fmc_analyze(fmc_from_transition(WMatrix(mm, {{0, 1}, {1, 0}})));
  CHECK(r.period == 2);
  CHECK(r.tau == 1);
}

TEST_CASE("fuzzy chains need a t-norm clodum") {
  CHECK_THROWS(fmc_analyze(FmcSpec{WMatrix::identity(mp, 2)}));
}
