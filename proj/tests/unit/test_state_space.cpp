#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "wlsys/applications.hpp"
#include "wlsys/error.hpp"
#include "wlsys/spectral.hpp"
#include "wlsys/state_space.hpp"

using namespace wlsys;
using testsupport::random_matrix;
using testsupport::random_vector;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
const Clodum mp(ClodumKind::MaxPlus);

SystemSpec random_system(const Clodum& c, SystemMode mode, std::size_t n, std::size_t p, std::size_t q,
                         testsupport::Rng& rng) {
  return SystemSpec::constant(mode, random_matrix(c, n, n, rng), random_matrix(c, n, p, rng),
                              random_matrix(c, q, n, rng), random_matrix(c, q, p, rng));
}

// Time-varying system whose A(t) is drawn from a fixed table.
SystemSpec time_varying(const Clodum& c, SystemMode mode, std::size_t n, testsupport::Rng& rng, int horizon) {
  std::vector<WMatrix> as;
  for (int t = 0; t <= horizon; ++t) as.push_back(random_matrix(c, n, n, rng));
  std::vector<WMatrix> bs;
  for (int t = 0; t <= horizon; ++t) bs.push_back(random_matrix(c, n, 1, rng));
  return SystemSpec(c, mode, MatrixProvider([as](int t) { return as.at(static_cast<std::size_t>(t)); }, n, n),
                    MatrixProvider([bs](int t) { return bs.at(static_cast<std::size_t>(t)); }, n, 1),
                    MatrixProvider(random_matrix(c, 1, n, rng)), MatrixProvider(random_matrix(c, 1, 1, rng)));
}

std::vector<WVector> random_inputs(const Clodum& c, std::size_t p, int T, testsupport::Rng& rng) {
  std::vector<WVector> u;
  for (int t = 0; t < T; ++t) u.push_back(random_vector(c, p, rng));
  return u;
}

SystemSpec filter_system(const std::vector<double>& a) {
  FilterSpec f;
  f.a = a;
  f.b = {0.0};
  return filter_to_state_space(f);
}

WMatrix mode_identity(const Clodum& c, SystemMode m, std::size_t n) {
  return m == SystemMode::Max ? WMatrix::identity(c, n) : WMatrix::dual_identity(c, n);
}
}  // namespace

TEST_CASE("system dimensions are validated") {
  const WMatrix a = WMatrix::bottoms(mp, 2, 2);
  CHECK_THROWS_AS(SystemSpec::constant(SystemMode::Max, a, WMatrix::bottoms(mp, 3, 1), WMatrix::bottoms(mp, 1, 2),
                                       WMatrix::bottoms(mp, 1, 1)),
                  DimensionError);
  CHECK_THROWS_AS(SystemSpec::constant(SystemMode::Max, a, WMatrix::bottoms(mp, 2, 1), WMatrix::bottoms(mp, 1, 2),
                                       WMatrix::bottoms(mp, 2, 1)),
                  DimensionError);
  const SystemSpec tv(mp, SystemMode::Max, MatrixProvider([](int) { return WMatrix::bottoms(mp, 3, 3); }, 2, 2),
                      MatrixProvider(WMatrix::bottoms(mp, 2, 1)), MatrixProvider(WMatrix::bottoms(mp, 1, 2)),
                      MatrixProvider(WMatrix::bottoms(mp, 1, 1)));
  CHECK_THROWS_AS(tv.a(1), DimensionError);
}

TEST_CASE("transition matrices") {
  testsupport::Rng rng(51);
  const SystemSpec sys = random_system(mp, SystemMode::Max, 3, 1, 1, rng);
  for (int t = 0; t <= 5; ++t) CHECK(approx_equal(transition_matrix(sys, t, 0), matrix_power(sys.a(0), t)));
  CHECK(transition_matrix(sys, 4, 4) == WMatrix::identity(mp, 3));
  CHECK_THROWS_AS(transition_matrix(sys, 1, 2), DomainError);

  const WMatrix a1(mp, {{0, -1}, {2, -inf}});
  const WMatrix a2(mp, {{1, 3}, {-inf, 0}});
  const SystemSpec tv(mp, SystemMode::Max,
                      MatrixProvider([=](int t) { return t == 1 ? a1 : a2; }, 2, 2),
                      MatrixProvider(WMatrix::bottoms(mp, 2, 1)), MatrixProvider(WMatrix::bottoms(mp, 1, 2)),
                      MatrixProvider(WMatrix::bottoms(mp, 1, 1)));
  // A(2) A(1) by hand: [[max(1+0, 3+2), max(1-1, 3-inf)], [max(-inf, 0+2), max(-inf, -inf)]].
  CHECK(transition_matrix(tv, 2, 0) == WMatrix(mp, {{5, 0}, {2, -inf}}));
}

TEST_CASE("transition semigroup on random time-varying systems") {
  testsupport::Rng rng(52);
  for (ClodumKind k : testsupport::all_kinds()) {
    const Clodum c(k);
    for (SystemMode mode : {SystemMode::Max, SystemMode::Min}) {
      int bad = 0;
      for (int n = 0; n < 200; ++n) {
        const SystemSpec sys = time_varying(c, mode, 3, rng, 6);
        const int t0 = std::uniform_int_distribution<int>(0, 2)(rng);
        const int t1 = t0 + std::uniform_int_distribution<int>(0, 2)(rng);
        const int t2 = t1 + std::uniform_int_distribution<int>(0, 2)(rng);
        const WMatrix lhs = mode == SystemMode::Max
                                ? maxmul(transition_matrix(sys, t2, t1), transition_matrix(sys, t1, t0))
                                : minmul(transition_matrix(sys, t2, t1), transition_matrix(sys, t1, t0));
        if (!approx_equal(lhs, transition_matrix(sys, t2, t0))) ++bad;
      }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("homogeneous response") {
  testsupport::Rng rng(53);
  const SystemSpec sys = random_system(mp, SystemMode::Max, 3, 2, 2, rng);
  const WVector x0 = random_vector(mp, 3, rng);
  const Trajectory tr = simulate(sys, x0, std::vector<WVector>(6, WVector::bottoms(mp, 2)), 6);
  for (int t = 0; t <= 6; ++t)
    CHECK(approx_equal(tr.states[static_cast<std::size_t>(t)], maxmul(matrix_power(sys.a(0), t), x0)));
}

TEST_CASE("all-null system stays null") {
  const SystemSpec sys = SystemSpec::constant(SystemMode::Max, WMatrix(mp, {{1, 2}, {0, -1}}),
                                              WMatrix::bottoms(mp, 2, 1), WMatrix::bottoms(mp, 1, 2),
                                              WMatrix::bottoms(mp, 1, 1));
  const Trajectory tr = simulate(sys, WVector::bottoms(mp, 2), {WVector(mp, {5}), WVector(mp, {7})}, 2);
  for (const auto& x : tr.states) CHECK(x.all_bottom());
  for (const auto& y : tr.outputs) CHECK(y.all_bottom());
}

TEST_CASE("input window convention") {
  testsupport::Rng rng(54);
  const SystemSpec sys = random_system(mp, SystemMode::Max, 2, 1, 1, rng);
  const WVector x0 = WVector::bottoms(mp, 2);
  auto u = random_inputs(mp, 1, 3, rng);
  std::vector<WVector> with_zero{WVector::bottoms(mp, 1)};
  with_zero.insert(with_zero.end(), u.begin(), u.end());
  const Trajectory a = simulate(sys, x0, u, 3);
  const Trajectory b = simulate(sys, x0, with_zero, 3);
  CHECK(a.outputs == b.outputs);
  with_zero[0] = WVector(mp, {0.0});
  CHECK_THROWS_AS(simulate(sys, x0, with_zero, 3), DomainError);
  CHECK_THROWS_AS(simulate(sys, x0, u, 5), DimensionError);
  CHECK_THROWS_AS(simulate(sys, WVector::bottoms(mp, 3), u, 3), DimensionError);
}

TEST_CASE("recursion equals the closed form") {
  testsupport::Rng rng(55);
  for (ClodumKind k : testsupport::all_kinds()) {
    const Clodum c(k);
    for (SystemMode mode : {SystemMode::Max, SystemMode::Min}) {
      for (int n = 0; n < 50; ++n) {
        const SystemSpec sys = n % 2 ? random_system(c, mode, 3, 2, 2, rng) : time_varying(c, mode, 3, rng, 6);
        const WVector x0 = random_vector(c, 3, rng);
        const auto u = random_inputs(c, sys.inputs(), 6, rng);
        const Trajectory rec = simulate(sys, x0, u, 6);
        const Trajectory cf = simulate_closed_form(sys, x0, u, 6);
        for (std::size_t t = 0; t <= 6; ++t) {
          CHECK(approx_equal(rec.states[t], cf.states[t]));
          CHECK(approx_equal(rec.outputs[t], cf.outputs[t]));
        }
        // Output splits into the null-input and null-state parts.
        const auto yni = null_input_response(sys, x0, 6);
        const auto yns = null_state_response(sys, u, 6);
        for (std::size_t t = 0; t <= 6; ++t) {
          const WVector y = mode == SystemMode::Max ? join(yni[t], yns[t]) : meet(yni[t], yns[t]);
          CHECK(approx_equal(rec.outputs[t], y));
        }
      }
    }
  }
}

TEST_CASE("min systems are conjugates of max systems") {
  testsupport::Rng rng(56);
  auto conj = [](const WMatrix& m) {
    WMatrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m.clodum().conjugate(m(i, j));
    return out;
  };
  for (ClodumKind k : {ClodumKind::MaxPlus, ClodumKind::MaxTimes}) {
    const Clodum c(k);
    for (int n = 0; n < 100; ++n) {
      const SystemSpec sys = random_system(c, SystemMode::Max, 3, 2, 1, rng);
      const SystemSpec dual =
          SystemSpec::constant(SystemMode::Min, conj(sys.a(0)), conj(sys.b(0)), conj(sys.c(0)), conj(sys.d(0)));
      const WVector x0 = random_vector(c, 3, rng);
      const auto u = random_inputs(c, 2, 5, rng);
      std::vector<WVector> cu;
      for (const auto& v : u) cu.push_back(conjugate(v));
      const Trajectory a = simulate(sys, x0, u, 5);
      const Trajectory b = simulate(dual, conjugate(x0), cu, 5);
      for (std::size_t t = 0; t <= 5; ++t) {
        CHECK(approx_equal(b.states[t], conjugate(a.states[t])));
        CHECK(approx_equal(b.outputs[t], conjugate(a.outputs[t])));
      }
    }
  }
}

TEST_CASE("impulse responses") {
  // First-order filter y(t) = max(y(t-1) + a1, u(t)): h(t) = t a1.
  const Signal h = impulse_response_signal(filter_system({-0.3}), 10);
  for (int t = 0; t <= 10; ++t) CHECK(h.at(t) == doctest::Approx(-0.3 * t));
  CHECK(h.at(-1) == -inf);

  // D-only system.
  const SystemSpec d_only = SystemSpec::constant(SystemMode::Max, WMatrix::bottoms(mp, 2, 2),
                                                 WMatrix::bottoms(mp, 2, 1), WMatrix::bottoms(mp, 1, 2),
                                                 WMatrix(mp, {{1.5}}));
  const Signal hd = impulse_response_signal(d_only, 5);
  CHECK(hd.at(0) == 1.5);
  for (int t = 1; t <= 5; ++t) CHECK(hd.at(t) == -inf);

  const SystemSpec tv(mp, SystemMode::Max, MatrixProvider([](int) { return WMatrix::bottoms(mp, 1, 1); }, 1, 1),
                      MatrixProvider(WMatrix::bottoms(mp, 1, 1)), MatrixProvider(WMatrix::bottoms(mp, 1, 1)),
                      MatrixProvider(WMatrix::bottoms(mp, 1, 1)));
  CHECK_THROWS_AS(impulse_response(tv, 3), UnsupportedOperation);
}

TEST_CASE("eleventh-order filter with a zero coefficient has a periodic impulse response") {
  std::vector<double> a(11);
  for (int k = 1; k <= 10; ++k) a[static_cast<std::size_t>(k - 1)] = -std::sin(M_PI * (k - 1) / 10.0) / 10.0;
  a[10] = 0.0;
  const SystemSpec sys = filter_system(a);
  const Signal h = impulse_response_signal(sys, 200);
  CHECK(cycle_mean_eigenvalue(sys.a(0)).lambda == doctest::Approx(0.0));
  CHECK(periodic_from(h, 0.0, 11, 121).has_value());
}

TEST_CASE("signal convolution") {
  const Signal f(mp, SystemMode::Max, 0, {0, 1});
  const Signal g(mp, SystemMode::Max, 0, {0, 2});
  const Signal fg = sup_convolve(f, g);
  CHECK(fg.start() == 0);
  CHECK(fg.samples() == std::vector<Scalar>{0, 2, 3});

  testsupport::Rng rng(57);
  for (ClodumKind k : testsupport::all_kinds()) {
    const Clodum c(k);
    for (int n = 0; n < 100; ++n) {
      auto rs = [&](SystemMode m) {
        const int start = std::uniform_int_distribution<int>(-3, 3)(rng);
        return Signal(c, m, start, random_vector(c, 1 + n % 5, rng).data());
      };
      const Signal x = rs(SystemMode::Max), y = rs(SystemMode::Max), z = rs(SystemMode::Max);
      CHECK(approx_equal(sup_convolve(x, Signal::impulse(c, SystemMode::Max)), x));
      CHECK(approx_equal(sup_convolve(x, y), sup_convolve(y, x)));
      CHECK(approx_equal(sup_convolve(sup_convolve(x, y), z), sup_convolve(x, sup_convolve(y, z))));
      const Signal xm = rs(SystemMode::Min), ym = rs(SystemMode::Min);
      CHECK(approx_equal(inf_convolve(xm, Signal::impulse(c, SystemMode::Min)), xm));
      CHECK(approx_equal(inf_convolve(xm, ym), inf_convolve(ym, xm)));
    }
  }
  CHECK_THROWS(sup_convolve(f, Signal(mp, SystemMode::Min, 0, {0})));
}

TEST_CASE("null-state response is the convolution of input and impulse response") {
  testsupport::Rng rng(58);
  for (ClodumKind k : testsupport::all_kinds()) {
    const Clodum c(k);
    for (SystemMode mode : {SystemMode::Max, SystemMode::Min}) {
      for (int n = 0; n < 50; ++n) {
        const SystemSpec sys = random_system(c, mode, 3, 1, 1, rng);
        const int T = 8;
        const auto u = random_inputs(c, 1, T, rng);
        std::vector<Scalar> us;
        for (const auto& v : u) us.push_back(v[0]);
        const Signal us_sig(c, mode, 1, us);
        const Signal h = impulse_response_signal(sys, T);
        const Signal conv = mode == SystemMode::Max ? sup_convolve(us_sig, h) : inf_convolve(us_sig, h);
        const auto y = null_state_response(sys, u, T);
        for (int t = 0; t <= T; ++t) CHECK(c.equal(y[static_cast<std::size_t>(t)][0], conv.at(t)));
      }
    }
  }
}

TEST_CASE("dilation time-invariant superposition") {
  testsupport::Rng rng(59);
  for (ClodumKind k : testsupport::all_kinds()) {
    const Clodum c(k);
    int bad = 0;
    for (int n = 0; n < 200; ++n) {
      const SystemSpec sys = random_system(c, SystemMode::Max, 3, 1, 1, rng);
      const int T = 6;
      const auto f = random_inputs(c, 1, T, rng);
      const auto g = random_inputs(c, 1, T, rng);
      const Scalar a = testsupport::random_scalar(c, rng), b = testsupport::random_scalar(c, rng);
      std::vector<WVector> mix;
      for (int t = 0; t < T; ++t) mix.push_back(join(scale(a, f[static_cast<std::size_t>(t)]), scale(b, g[static_cast<std::size_t>(t)])));
      const auto yf = null_state_response(sys, f, T);
      const auto yg = null_state_response(sys, g, T);
      const auto ym = null_state_response(sys, mix, T);
      for (std::size_t t = 0; t <= static_cast<std::size_t>(T); ++t)
        if (!approx_equal(ym[t], join(scale(a, yf[t]), scale(b, yg[t])))) ++bad;
      // Delaying the input by one step delays the output by one step.
      std::vector<WVector> shifted{WVector::bottoms(c, 1)};
      shifted.insert(shifted.end(), f.begin(), f.end());
      const auto ys = null_state_response(sys, shifted, T + 1);
      for (std::size_t t = 0; t <= static_cast<std::size_t>(T); ++t)
        if (!approx_equal(ys[t + 1], yf[t])) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("stability of filters") {
  // All coefficients <= 0 with a unique zero-mean self-loop.
  const StabilityReport s = check_causal_stable(filter_system({0, -0.5, -1}));
  CHECK(s.causal);
  CHECK(s.lambda == doctest::Approx(0.0));
  CHECK(s.bibo_upper);
  CHECK(s.eigenvalue_bound);
  REQUIRE(s.absolutely_stable.has_value());
  CHECK(*s.absolutely_stable);
  CHECK_FALSE(s.diverges);
  REQUIRE(s.periodicity.has_value());
  CHECK(s.periodicity->period == 1);
  CHECK(s.m_h == doctest::Approx(0.0));

  const StabilityReport env = check_causal_stable(filter_system({-0.008}));
  CHECK(env.bibo_upper);
  REQUIRE(env.absolutely_stable.has_value());
  CHECK_FALSE(*env.absolutely_stable);
  CHECK(env.diverges);

  const StabilityReport grow = check_causal_stable(filter_system({-1, 0.5}));
  CHECK(grow.lambda == doctest::Approx(0.25));
  CHECK_FALSE(grow.bibo_upper);
  CHECK(grow.diverges);

  const SystemSpec acyclic = SystemSpec::constant(SystemMode::Max, WMatrix::bottoms(mp, 2, 2),
                                                  WMatrix(mp, {{0}, {0}}), WMatrix(mp, {{0, 0}}),
                                                  WMatrix::bottoms(mp, 1, 1));
  const StabilityReport ac = check_causal_stable(acyclic);
  CHECK(ac.lambda == -inf);
  CHECK(ac.bibo_upper);
  CHECK_FALSE(ac.absolutely_stable.has_value());
}

TEST_CASE("stability of min systems") {
  FilterSpec f;
  f.a = {0.2, 0.0};
  f.b = {0.0};
  f.mode = SystemMode::Min;
  const SystemSpec sys = filter_to_state_space(f);
  const StabilityReport r = check_causal_stable(sys);
  CHECK(r.dual_lambda == doctest::Approx(0.0));
  CHECK(r.bibo_lower);
  f.a = {-0.2};
  const StabilityReport d = check_causal_stable(filter_to_state_space(f));
  CHECK_FALSE(d.bibo_lower);
}

TEST_CASE("eventual periodicity with a unique critical cycle") {
  testsupport::Rng rng(60);
  int tested = 0;
  for (int n = 0; n < 2000 && tested < 50; ++n) {
    const WMatrix a = testsupport::random_finite_matrix(mp, 4, 4, rng);
    const CycleMean cm = cycle_mean_eigenvalue(a);
    if (cm.critical_count != 1) continue;
    const SystemSpec sys = SystemSpec::constant(SystemMode::Max, a, testsupport::random_finite_matrix(mp, 4, 1, rng),
                                                testsupport::random_finite_matrix(mp, 1, 4, rng),
                                                WMatrix::bottoms(mp, 1, 1));
    const Signal h = impulse_response_signal(sys, 400);
    CHECK(periodic_from(h, cm.lambda, cm.critical_cycle.size(), 300).has_value());
    ++tested;
  }
  CHECK(tested == 50);
}

TEST_CASE("impulse-response criteria") {
  const Signal acausal(mp, SystemMode::Max, -2, {0, -inf, 0, -1});
  CHECK_FALSE(check_impulse_response(acausal).causal);
  std::vector<Scalar> ramp;
  for (int t = 0; t < 100; ++t) ramp.push_back(0.1 * t);
  const ImpulseStability r = check_impulse_response(Signal(mp, SystemMode::Max, 0, ramp));
  CHECK(r.causal);
  CHECK_FALSE(r.bibo_upper);
  CHECK(r.diverges);
  std::vector<Scalar> periodic;
  for (int t = 0; t < 100; ++t) periodic.push_back(t % 3 == 0 ? 0.0 : -0.5);
  const ImpulseStability p = check_impulse_response(Signal(mp, SystemMode::Max, 0, periodic));
  CHECK(p.bibo_upper);
  CHECK_FALSE(p.diverges);
  CHECK(p.m_h == 0.5);
}
