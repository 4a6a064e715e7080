#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lapdde/diagnostics.hpp"
#include "lapdde/engine.hpp"
#include "lapdde/error.hpp"
#include "lapdde/scenarios.hpp"
#include "support.hpp"

using namespace lapdde;

namespace {

TrajectoryHistory constant_history(std::vector<double> x, double h_bar, std::size_t samples) {
  TrajectoryHistory h(x.size(), 1, 0.0, 0.1, h_bar, {Prehistory::constant(x)});
  for (std::size_t k = 0; k < samples; ++k) h.append(0.1 * static_cast<double>(k), x);
  return h;
}

SimulationConfig basic(double t_end, double step, std::vector<double> a) {
  SimulationConfig c;
  c.t_end = t_end;
  c.step = step;
  c.initial_point = std::move(a);
  return c;
}

}  // namespace

TEST(Extrema, ConstantTrajectory) {
  const auto h = constant_history({2.5, 2.5, 2.5}, 0.5, 30);
  const auto e = window_extrema(h, 0.5);
  ASSERT_EQ(e.times.size(), 30u);
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    EXPECT_EQ(e.lower[k], 2.5);
    EXPECT_EQ(e.upper[k], 2.5);
  }
  EXPECT_THROW(window_extrema(h, 0.6), ValidationError);
}

TEST(Extrema, ZeroWindowIsPointwise) {
  scenarios::RandomSignalParams p;
  p.agents = 4;
  p.seed = 4;
  const auto s = scenarios::random_signal(p);
  const auto h = integrate_equation(s, basic(5.0, 0.01, {3, -1, 0, 2}));
  const auto e = window_extrema(h, 0.0);
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    const auto st = h.state(h.first_index() + k);
    EXPECT_EQ(e.upper[k], *std::max_element(st.begin(), st.end()));
    EXPECT_EQ(e.lower[k], *std::min_element(st.begin(), st.end()));
  }
}

TEST(Extrema, BruteForceWindow) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  TrajectoryHistory h(2, 1, 0.0, 0.1, 0.35, {Prehistory(2, [](std::size_t i, double t) { return i + t; })});
  for (int k = 0; k < 50; ++k) {
    std::vector<double> st{g(rng), g(rng)};
    h.append(0.1 * k, st);
  }
  const auto e = window_extrema(h, 0.35);
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    const double t = e.times[k];
    double lo = 1e300, hi = -1e300;
    for (std::size_t s = 0; s < h.size(); ++s) {
      if (h.times()[s] >= t - 0.35 - 1e-12 && h.times()[s] <= t + 1e-12) {
        for (std::size_t i = 0; i < 2; ++i) {
          lo = std::min(lo, h.value(s, i));
          hi = std::max(hi, h.value(s, i));
        }
      }
    }
    for (std::size_t i = 0; i < 2; ++i) {
      const double edge = h.at(i, t - 0.35);  // phi itself before t0
      lo = std::min(lo, edge);
      hi = std::max(hi, edge);
    }
    EXPECT_NEAR(e.lower[k], lo, 1e-12) << t;
    EXPECT_NEAR(e.upper[k], hi, 1e-12) << t;
  }
}

TEST(Extrema, DelayedRunIsMonotone) {
  auto s = oracle::constant_signal({{0, 1}, {1, 0}}, 20.0, 0.5);
  const auto h = integrate_equation(s, basic(20.0, 1e-3, {0, 2}));
  const auto e = window_extrema(h, 0.5);
  EXPECT_TRUE(monotonicity_violations(e, 1e-9, true).empty());
}

TEST(Ordered, SortedAndTies) {
  const auto h = constant_history({1.0, 2.0, 3.0}, 0.0, 3);
  const auto z = ordered_components(h);
  for (const auto& p : z.permutation) EXPECT_EQ(p, (std::vector<std::size_t>{0, 1, 2}));
  const auto tie = constant_history({5.0, 1.0, 5.0}, 0.0, 2);
  EXPECT_EQ(ordered_components(tie).permutation[0], (std::vector<std::size_t>{1, 0, 2}));
}

TEST(Ordered, MatchesSortAndPreservesSum) {
  scenarios::RandomSignalParams p;
  p.agents = 5;
  p.h_bar = 0.5;
  p.seed = 6;
  const auto s = scenarios::random_signal(p);
  const auto h = integrate_equation(s, basic(5.0, 0.01, {3, -1, 0, 2, 7}));
  const auto z = ordered_components(h);
  for (std::size_t k = 0; k < z.times.size(); ++k) {
    const auto st = h.state(h.first_index() + k);
    std::vector<double> sorted(st.begin(), st.end());
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(z.z[k], sorted);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      a += z.z[k][i];
      b += st[z.permutation[k][i]];
    }
    EXPECT_EQ(a, b);
  }
}

TEST(ResidualWindow, Rectangles) {
  std::vector<double> grid;
  for (int k = 0; k <= 80; ++k) grid.push_back(0.1 * k);
  const auto zero = residual_window_integral(ResidualSchedule::zero(2), 1.0, grid);
  for (const auto& row : zero.values)
    for (double v : row) EXPECT_EQ(v, 0.0);
  const auto c = residual_window_integral(ResidualSchedule(1, {{0, 5, {1.0}}}), 1.0, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const double want = std::clamp(5.0 - t, 0.0, 1.0);
    EXPECT_NEAR(c.values[k][0], want, 1e-12) << t;
  }
  EXPECT_THROW(residual_window_integral(ResidualSchedule::zero(1), 0.0, grid), ValidationError);
}

TEST(ResidualWindow, GeometricBursts) {
  // Burst k on [k, k + 0.5) with height 2^-k: the window [t, t+1] meets at
  // most two bursts, so the tail maximum is bounded by 0.5 * (2^-m + 2^-(m+1)).
  std::vector<PiecewiseSchedule::Piece> pieces;
  for (int k = 0; k < 20; ++k) pieces.push_back({double(k), k + 0.5, {std::ldexp(1.0, -k)}});
  ResidualSchedule r(1, pieces);
  std::vector<double> grid;
  for (int k = 0; k <= 1900; ++k) grid.push_back(0.01 * k);
  const auto c = residual_window_integral(r, 1.0, grid);
  for (int m : {2, 5, 10}) {
    EXPECT_NEAR(c.max_after(m), 0.5 * std::ldexp(1.0, -m), 1e-12);
  }
}

TEST(Verdict, Outcomes) {
  const auto flat = constant_history({0.75, 0.75}, 0.0, 100);
  const auto v = consensus_verdict(flat);
  EXPECT_EQ(v.outcome, ConsensusOutcome::converged_common_limit);
  EXPECT_EQ(v.c_star, 0.75);
  EXPECT_TRUE(v.synchrony_asserted);

  NetworkSignal one(1, 1.0, 0.0, {{0, 100, SquareMatrix(1), SquareMatrix(1)}});
  auto c = basic(100.0, 0.01, {0.0});
  c.residuals = ResidualSchedule(1, {{0, 100, {1.0}}});
  const auto y = integrate_inequality(one, c);
  VerdictOptions o;
  o.floor = -50.0;
  const auto d = consensus_verdict(y, o);
  EXPECT_EQ(d.outcome, ConsensusOutcome::diverged_to_minus_infinity);
  EXPECT_FALSE(d.synchrony_asserted);

  const std::vector<std::size_t> sizes{2, 2};
  const std::vector<double> w{1.0, 1.0};
  const auto s = scenarios::disconnected_clusters(sizes, w, 30.0);
  const auto x = integrate_equation(s, basic(30.0, 0.01, {0, 0, 1, 1}));
  const auto n = consensus_verdict(x);
  EXPECT_EQ(n.outcome, ConsensusOutcome::not_converged_at_horizon);
  EXPECT_NEAR(n.final_diameter, 1.0, 1e-12);
}

TEST(Report, EnvelopeAndInvariants) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    scenarios::RandomSignalParams p;
    p.agents = 3;
    p.h_bar = 0.5;
    p.a_bar = 2.0;
    p.horizon = 40.0;
    p.density = 1.0;
    p.seed = seed;
    const auto s = scenarios::random_signal(p);
    const auto h = integrate_equation(s, basic(40.0, 0.01, {0, 1, 2}));
    const auto r = make_report(h, nullptr);
    EXPECT_TRUE(r.monotonicity.empty());
    EXPECT_NE(r.verdict.outcome, ConsensusOutcome::diverged_to_minus_infinity);
    for (std::size_t k = 0; k < r.diameter.size(); ++k) {
      EXPECT_GE(r.diameter[k], 0.0);
      EXPECT_LE(r.extrema.lower[k], r.ordered.z[k].front());
      EXPECT_GE(r.extrema.upper[k], r.ordered.z[k].back());
      if (r.verdict.outcome == ConsensusOutcome::converged_common_limit) {
        EXPECT_LE(r.extrema.lower[k], r.verdict.c_star + 1e-9);
        EXPECT_GE(r.extrema.upper[k], r.verdict.c_star - 1e-9);
      }
    }
  }
}
