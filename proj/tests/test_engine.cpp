#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lapdde/engine.hpp"
#include "lapdde/error.hpp"
#include "lapdde/scenarios.hpp"
#include "support.hpp"

using namespace lapdde;

namespace {

SimulationConfig basic(double t_end, double step, std::vector<double> a) {
  SimulationConfig c;
  c.t_end = t_end;
  c.step = step;
  c.initial_point = std::move(a);
  return c;
}

double max_abs_diff_final(const TrajectoryHistory& x, const TrajectoryHistory& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.agents(); ++i) {
    d = std::max(d, std::abs(x.value(x.size() - 1, i) - y.value(y.size() - 1, i)));
  }
  return d;
}

}  // namespace

TEST(Grid, BreakpointsAreInsertedAndMerged) {
  const auto g = build_time_grid(0.0, 1.0, 0.25, {0.3, 0.5 + 1e-13, 1.0});
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g[1], 0.25);
  EXPECT_DOUBLE_EQ(g[2], 0.3);
  EXPECT_DOUBLE_EQ(g[3], 0.5 + 1e-13);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
}

TEST(Config, StepBoundsAreEnforced) {
  auto s = oracle::constant_signal({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 10.0, 0.4);
  auto c = basic(5.0, 0.06, {0, 1, 2});
  try {
    validate_config(s, c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("step <= 0.1/((n-1)*a_bar)"), std::string::npos) << e.what();
  }
  c.step = 0.05;
  EXPECT_NO_THROW(validate_config(s, c));
  c.t_end = 11.0;
  EXPECT_THROW(validate_config(s, c), ValidationError);
  c.t_end = 5.0;
  c.initial_point = {0, 1};
  EXPECT_THROW(validate_config(s, c), ValidationError);

  auto short_delay = oracle::constant_signal({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 10.0, 0.1);
  auto d = basic(5.0, 0.03, {0, 1, 2});
  EXPECT_THROW(validate_config(short_delay, d), ValidationError);  // h_bar / 4
  d.step = 0.025;
  EXPECT_NO_THROW(validate_config(short_delay, d));
}

TEST(Engine, SingleAgentIsConstant) {
  NetworkSignal s(1, 1.0, 0.0, {{0, 5, SquareMatrix(1), SquareMatrix(1)}});
  const auto h = integrate_equation(s, basic(5.0, 0.01, {3.5}));
  for (std::size_t k = h.first_index(); k < h.size(); ++k) EXPECT_EQ(h.value(k, 0), 3.5);
}

TEST(Engine, TwoAgentClosedForm) {
  auto s = oracle::constant_signal({{0, 1}, {1, 0}}, 5.0);
  const auto h = integrate_equation(s, basic(5.0, 1e-3, {0, 2}));
  double err = 0.0;
  for (std::size_t k = h.first_index(); k < h.size(); ++k) {
    const double t = h.times()[k];
    err = std::max(err, std::abs(h.value(k, 0) - (1 - std::exp(-2 * t))));
    err = std::max(err, std::abs(h.value(k, 1) - (1 + std::exp(-2 * t))));
  }
  EXPECT_LT(err, 1e-4);
}

TEST(Engine, TwoAgentDelayedMatchesFineReference) {
  auto s = oracle::constant_signal({{0, 1}, {1, 0}}, 20.0, 0.5);
  const auto h = integrate_equation(s, basic(20.0, 1e-3, {0, 2}));
  const auto ref = integrate_equation(s, basic(20.0, 1e-5, {0, 2}));
  const double x1 = h.value(h.size() - 1, 0), x2 = h.value(h.size() - 1, 1);
  EXPECT_LT(std::abs(x1 - x2), 1e-3);
  EXPECT_GE(x1, 0.0);
  EXPECT_LE(x1, 2.0);
  EXPECT_LT(max_abs_diff_final(h, ref), 1e-5);
}

TEST(Engine, ZeroResidualsReproduceEquationBitwise) {
  scenarios::RandomSignalParams p;
  p.agents = 4;
  p.h_bar = 0.5;
  p.seed = 5;
  const auto s = scenarios::random_signal(p);
  auto c = basic(10.0, 0.01, {1, -1, 2, 0});
  const auto x = integrate_equation(s, c);
  c.residuals = ResidualSchedule::zero(4);
  const auto y = integrate_inequality(s, c);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i) ASSERT_EQ(x.value(k, i), y.value(k, i));
}

TEST(Engine, ResidualOnlyDrift) {
  NetworkSignal s(1, 1.0, 0.0, {{0, 10, SquareMatrix(1), SquareMatrix(1)}});
  auto c = basic(10.0, 0.01, {0});
  c.residuals = ResidualSchedule(1, {{0, 10, {1.0}}});
  const auto y = integrate_inequality(s, c);
  for (std::size_t k = y.first_index(); k < y.size(); ++k) EXPECT_NEAR(y.value(k, 0), -y.times()[k], 1e-12);
  EXPECT_THROW(integrate_equation(s, c), ValidationError);
  c.residuals.reset();
  EXPECT_THROW(integrate_inequality(s, c), ValidationError);
}

TEST(Engine, ComparisonWithResiduals) {
  auto s = oracle::constant_signal({{0, 1}, {1, 0}}, 10.0, 0.2);
  auto c = basic(10.0, 0.01, {0, 2});
  c.residuals = ResidualSchedule(2, {{0, 5, {0.1, 0.0}}});
  const auto y = integrate_inequality(s, c);
  c.residuals.reset();
  c.grid_points = {5.0};
  const auto x = integrate_equation(s, c);
  ASSERT_EQ(x.size(), y.size());
  const double tol = 1e-9 + 10 * 0.01 * 1.0 * 2;
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(y.value(k, i), x.value(k, i) + tol);
  EXPECT_LT(y.value(y.size() - 1, 0), x.value(x.size() - 1, 0) - 0.1);
}

TEST(Engine, NonnegativityAndLinearity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    scenarios::RandomSignalParams p;
    p.agents = 4;
    p.h_bar = 0.5;
    p.seed = seed;
    const auto s = scenarios::random_signal(p);
    std::vector<double> a(4), b(4), combo(4);
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      combo[i] = 2.0 * a[i] - 3.0 * b[i];
    }
    auto ca = basic(10.0, 0.01, a), cb = basic(10.0, 0.01, b), cc = basic(10.0, 0.01, combo);
    const auto xa = integrate_equation(s, ca), xb = integrate_equation(s, cb), xc = integrate_equation(s, cc);
    for (std::size_t k = 0; k < xa.size(); ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_GE(xa.value(k, i), -1e-12);
        EXPECT_NEAR(xc.value(k, i), 2.0 * xa.value(k, i) - 3.0 * xb.value(k, i), 1e-12);
      }
    }
  }
}

TEST(Engine, GridRefinementConverges) {
  scenarios::RandomSignalParams p;
  p.agents = 3;
  p.h_bar = 0.4;
  p.seed = 17;
  const auto s = scenarios::random_signal(p);
  const auto fine = integrate_equation(s, basic(8.0, 1.25e-4, {0, 1, 3}));
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const double e = max_abs_diff_final(integrate_equation(s, basic(8.0, dt, {0, 1, 3})), fine);
    EXPECT_LT(e, 5.0 * dt);
    if (prev > 0.0) { EXPECT_LT(e, 0.75 * prev); }
    prev = e;
  }
}

TEST(Engine, BatchLanesMatchSingleRuns) {
  scenarios::RandomSignalParams p;
  p.agents = 3;
  p.h_bar = 0.3;
  p.seed = 2;
  const auto s = scenarios::random_signal(p);
  auto c = basic(5.0, 0.01, {0, 0, 0});
  std::vector<std::vector<double>> starts{{0, 1, 2}, {5, -1, 0.5}, {1, 1, 1}};
  std::vector<Prehistory> pre{Prehistory::constant({0, 0, 0}), Prehistory::constant({1, 2, 3}),
                              Prehistory(3, [](std::size_t i, double t) { return std::sin(t + i); })};
  const auto batch = integrate_batch(s, c, starts, pre);
  for (std::size_t b = 0; b < 3; ++b) {
    auto cb = c;
    cb.initial_point = starts[b];
    cb.prehistory = pre[b];
    const auto single = integrate_equation(s, cb);
    for (std::size_t k = 0; k < single.size(); ++k)
      for (std::size_t i = 0; i < 3; ++i) ASSERT_EQ(single.value(k, i), batch.value(k, i, b));
  }
}

TEST(Evolutionary, UncoupledIsIdentity) {
  NetworkSignal s(3, 1.0, 0.0, {{0, 4, SquareMatrix(3), SquareMatrix(3)}});
  const auto u = evolutionary_matrix(s, 1.0, 4.0, 0.01);
  for (std::size_t k = 0; k < u.samples(); ++k)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(u.entry(k, i, j), i == j ? 1.0 : 0.0);
  const auto before = u.at(0.5);
  for (double v : before) EXPECT_EQ(v, 0.0);
}

TEST(Evolutionary, MatchesMatrixExponential) {
  auto s = oracle::constant_signal({{0, 1}, {1, 0}}, 3.0);
  const auto u = evolutionary_matrix(s, 0.5, 3.0, 1e-4);
  double err = 0.0;
  for (std::size_t k = 0; k < u.samples(); k += 50) {
    const Eigen::MatrixXd e = (-oracle::laplacian(s.segments()[0].weights) * (u.time(k) - 0.5)).exp();
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) err = std::max(err, std::abs(u.entry(k, i, j) - e(i, j)));
  }
  EXPECT_LT(err, 1e-5);
}

TEST(Evolutionary, DelayedRingRowSumsWithinBounds) {
  const auto s = scenarios::delayed_ring(3, 1.0, 0.2, 10.0);
  const auto u = evolutionary_matrix(s, 0.0, 10.0, 0.01);
  const double psi = std::exp(-2.0 * 1.0 * 0.2);
  for (std::size_t k = 0; k < u.samples(); ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double r = u.row_sum(k, i);
      EXPECT_LE(r, 1.0 + 1e-9);
      EXPECT_GE(r, psi - 1e-9);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_GE(u.entry(k, i, j), -1e-12);
    }
  }
}

TEST(Cauchy, NoForcingReducesToLinearity) {
  scenarios::RandomSignalParams p;
  p.agents = 3;
  p.h_bar = 0.3;
  p.horizon = 3.0;
  p.seed = 8;
  const auto s = scenarios::random_signal(p);
  auto c = basic(3.0, 1e-3, {1, 0, -1});
  c.prehistory = Prehistory::constant({0.5, 0.5, 0.5});
  EXPECT_LT(cauchy_check(s, c, 1e-2), 1e-9);
}

TEST(Cauchy, SingleAgentConstantForcing) {
  NetworkSignal s(1, 1.0, 0.0, {{0, 2, SquareMatrix(1), SquareMatrix(1)}});
  auto c = basic(2.0, 1e-3, {0});
  c.forcing = PiecewiseSchedule(1, {{0, 2, {1.0}}});
  EXPECT_LT(cauchy_check(s, c, 1e-2), 1e-12);
}

TEST(Cauchy, RandomSignalWithForcing) {
  scenarios::RandomSignalParams p;
  p.agents = 3;
  p.h_bar = 0.3;
  p.horizon = 3.0;
  p.seed = 12;
  const auto s = scenarios::random_signal(p);
  auto c = basic(3.0, 1e-3, {0.2, -0.4, 1.0});
  c.forcing = PiecewiseSchedule(3, {{0.0, 1.0, {1.0, -0.5, 0.0}}, {1.5, 2.5, {0.0, 2.0, -1.0}}});
  EXPECT_LT(cauchy_check(s, c, 1e-2), 5e-3);
  EXPECT_THROW(cauchy_check(s, c, 1.5e-3), ValidationError);
}
