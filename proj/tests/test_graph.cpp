#include <gtest/gtest.h>

#include <random>

#include "lapdde/error.hpp"
#include "lapdde/graph.hpp"
#include "lapdde/scenarios.hpp"
#include "support.hpp"

using namespace lapdde;

namespace {

bool brute_strong(const DirectedGraph& g) {
  const auto r = oracle::closure(g);
  for (const auto& row : r)
    for (bool b : row)
      if (!b) return false;
  return true;
}

std::optional<std::size_t> brute_root(const DirectedGraph& g) {
  const auto r = oracle::closure(g);
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (std::all_of(r[u].begin(), r[u].end(), [](bool b) { return b; })) return u;
  }
  return std::nullopt;
}

}  // namespace

TEST(Graph, ArcsIgnoreSelfLoopsAndDuplicates) {
  DirectedGraph g(3);
  g.add_arc(0, 0);
  g.add_arc(0, 1);
  g.add_arc(0, 1);
  EXPECT_EQ(g.arcs().size(), 1u);
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_FALSE(g.has_arc(1, 0));
}

TEST(Graph, GraphOfUsesInfluenceDirection) {
  // a_01 > 0: agent 1 influences agent 0, arc (1, 0).
  const auto g = graph_of(SquareMatrix::from_rows({{0, 1}, {0, 0}}));
  EXPECT_TRUE(g.has_arc(1, 0));
  EXPECT_FALSE(g.has_arc(0, 1));
}

TEST(Graph, SmallCases) {
  EXPECT_TRUE(strongly_connected(DirectedGraph(1)));
  DirectedGraph cycle(3);
  cycle.add_arc(0, 1);
  cycle.add_arc(1, 2);
  cycle.add_arc(2, 0);
  EXPECT_TRUE(strongly_connected(cycle));
  DirectedGraph one_way(2);
  one_way.add_arc(0, 1);
  EXPECT_FALSE(strongly_connected(one_way));
  EXPECT_TRUE(quasi_strongly_connected(one_way).connected);

  DirectedGraph star(4);
  for (std::size_t v : {0u, 1u, 3u}) star.add_arc(2, v);
  const auto q = quasi_strongly_connected(star);
  EXPECT_TRUE(q.connected);
  EXPECT_EQ(q.root, 2u);

  const auto iso = quasi_strongly_connected(DirectedGraph(2));
  EXPECT_FALSE(iso.connected);
  EXPECT_FALSE(iso.root.has_value());
  EXPECT_FALSE(weakly_connected(DirectedGraph(2)));
  EXPECT_TRUE(weakly_connected(one_way));
}

TEST(Graph, AgreesWithTransitiveClosure) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> dens(0.05, 0.6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = oracle::random_graph(size(rng), dens(rng), rng);
    const bool strong = strongly_connected(g);
    const auto q = quasi_strongly_connected(g);
    EXPECT_EQ(strong, brute_strong(g));
    EXPECT_EQ(q.root, brute_root(g));
    EXPECT_EQ(q.connected, brute_root(g).has_value());
    if (strong) { EXPECT_TRUE(q.connected); }
    std::size_t count = 0;
    const auto comp = strong_components(g, &count);
    const auto r = oracle::closure(g);
    for (std::size_t u = 0; u < g.size(); ++u)
      for (std::size_t v = 0; v < g.size(); ++v) EXPECT_EQ(comp[u] == comp[v], r[u][v] && r[v][u]);
  }
}

TEST(Integral, ExactRectangles) {
  auto zero = oracle::constant_signal({{0, 0}, {0, 0}}, 3.0);
  EXPECT_EQ(interval_integral(zero, 0, 1, 0, 3), 0.0);
  auto two = oracle::constant_signal({{0, 2}, {2, 0}}, 3.0);
  EXPECT_DOUBLE_EQ(interval_integral(two, 0, 1, 0, 3), 6.0);
  EXPECT_THROW(interval_integral(two, 0, 1, 2, 1), ValidationError);
}

TEST(Integral, MatchesRiemannSum) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    scenarios::RandomSignalParams p;
    p.agents = 3;
    p.segments = 4;
    p.horizon = 2.0;
    p.seed = seed;
    const auto s = scenarios::random_signal(p);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(interval_integral(s, i, j, 0.1, 1.9), oracle::riemann(s, i, j, 0.1, 1.9, 1e-5), 1e-4);
  }
}

TEST(Certificate, ConstantStronglyConnected) {
  const auto s = scenarios::delayed_ring(4, 0.5, 0.0, 5.0);
  const auto cert = repeated_strong_connectivity(s, EventSequence::uniform(1.0, 5.0), 0.5);
  EXPECT_TRUE(cert.verdict);
  EXPECT_EQ(cert.intervals.size(), 5u);
  EXPECT_FALSE(repeated_strong_connectivity(s, EventSequence::uniform(1.0, 5.0), 0.51).verdict);
  EXPECT_THROW(repeated_strong_connectivity(s, EventSequence::uniform(1.0, 5.0), 0.0), ValidationError);
}

TEST(Certificate, IntermittentDependsOnEvents) {
  const auto base = SquareMatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const std::vector<double> active{1, 1, 1, 1};
  const std::vector<double> silence{1, 2, 4, 8};
  const auto sc = scenarios::intermittent(base, active, silence);
  EXPECT_TRUE(repeated_strong_connectivity(sc.signal, *sc.events, 1.0).verdict);
  EXPECT_FALSE(repeated_strong_connectivity(sc.signal, EventSequence::uniform(1.0, sc.signal.horizon()), 1.0).verdict);
  EXPECT_FALSE(repeated_strong_connectivity(sc.signal, *sc.events, 1.5).verdict);
}

TEST(Certificate, MonotoneInEpsilon) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    scenarios::RandomSignalParams p;
    p.agents = 4;
    p.seed = seed;
    const auto s = scenarios::random_signal(p);
    const auto ev = EventSequence::uniform(2.5, 10.0);
    bool passed = false;
    for (double eps = 3.0; eps > 1e-3; eps *= 0.8) {
      const bool v = repeated_strong_connectivity(s, ev, eps).verdict;
      if (passed) { EXPECT_TRUE(v); }
      passed = passed || v;
    }
  }
}

TEST(Certificate, FlagsAreConsistentWithArcs) {
  scenarios::RandomSignalParams p;
  p.agents = 5;
  p.density = 0.3;
  p.seed = 77;
  const auto s = scenarios::random_signal(p);
  const auto cert = repeated_strong_connectivity(s, EventSequence::uniform(1.0, 10.0), 0.3);
  for (const auto& iv : cert.intervals) {
    DirectedGraph g(5);
    for (auto [j, i] : iv.arcs) {
      g.add_arc(j, i);
      EXPECT_GE(interval_integral(s, i, j, iv.t_start, iv.t_end), 0.3);
    }
    EXPECT_EQ(iv.strong, brute_strong(g));
    EXPECT_EQ(iv.root, brute_root(g));
  }
}

TEST(TypeSymmetry, Basics) {
  const auto ev = EventSequence::uniform(1.0, 4.0);
  auto sym = oracle::constant_signal({{0, 0.3, 0}, {0.3, 0, 1}, {0, 1, 0}}, 4.0);
  EXPECT_TRUE(type_symmetry_check(sym, ev, 1.0));
  EXPECT_TRUE(instantaneous_type_symmetry_check(sym, 1.0));
  auto skew = oracle::constant_signal({{0, 2}, {1, 0}}, 4.0);
  EXPECT_FALSE(type_symmetry_check(skew, ev, 1.999));
  EXPECT_TRUE(type_symmetry_check(skew, ev, 2.0));
  auto skew3 = oracle::constant_signal({{0, 3}, {1, 0}}, 4.0);
  EXPECT_FALSE(instantaneous_type_symmetry_check(skew3, 2.9));
  EXPECT_TRUE(instantaneous_type_symmetry_check(skew3, 3.0));
  EXPECT_THROW(type_symmetry_check(sym, ev, 0.5), ValidationError);
}

TEST(TypeSymmetry, AlternatingNeedsAlignedEvents) {
  const auto a = SquareMatrix::from_rows({{0, 1}, {0, 0}});
  const auto b = SquareMatrix::from_rows({{0, 0}, {1, 0}});
  std::vector<Segment> segs;
  for (int k = 0; k < 6; ++k) segs.push_back({double(k), double(k + 1), k % 2 ? b : a, SquareMatrix(2)});
  NetworkSignal s(2, 1.0, 0.0, segs);
  EXPECT_TRUE(type_symmetry_check(s, EventSequence::uniform(2.0, 6.0), 1.0));
  EXPECT_FALSE(type_symmetry_check(s, EventSequence::uniform(1.5, 6.0), 1.0));
  EXPECT_FALSE(instantaneous_type_symmetry_check(s, 1e6));
}

TEST(TypeSymmetry, InstantaneousImpliesIntegral) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    scenarios::RandomSignalParams p;
    p.agents = 4;
    p.seed = seed;
    p.type_symmetric_K = 2.0;
    const auto s = scenarios::random_signal(p);
    ASSERT_TRUE(instantaneous_type_symmetry_check(s, 2.0));
    EXPECT_TRUE(type_symmetry_check(s, EventSequence::uniform(0.7, 10.0), 2.0));
    EXPECT_TRUE(type_symmetry_check(s, EventSequence({0.0, 0.13, 4.0, 9.99}), 2.0));
    // Persistent graph symmetry: (j,i) at theta implies (i,j) at theta/K.
    const double theta = 3.0;
    const auto g = persistent_graph(s, 10.0, theta);
    const auto g2 = persistent_graph(s, 10.0, theta / 2.0);
    for (auto [j, i] : g.arcs()) EXPECT_TRUE(g2.has_arc(i, j));
  }
}

TEST(MBound, Rectangles) {
  auto zero = oracle::constant_signal({{0, 0}, {0, 0}}, 4.0);
  EXPECT_EQ(m_bound(zero, EventSequence::uniform(1.0, 4.0)), 0.0);
  auto full = oracle::constant_signal({{0, 1.5}, {1.5, 0}}, 6.0);
  EXPECT_DOUBLE_EQ(m_bound(full, EventSequence::uniform(2.0, 6.0)), 3.0);
  EXPECT_DOUBLE_EQ(m_bound(full, EventSequence({0, 0.5, 1.5, 3.5})), 3.0);
}

TEST(Persistent, Thresholds) {
  auto full = oracle::constant_signal({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 5.0);
  EXPECT_EQ(persistent_graph(full, 5.0, 4.9).arcs().size(), 6u);
  const auto a = SquareMatrix::from_rows({{0, 0.5}, {0.5, 0}});
  NetworkSignal brief(2, 1.0, 0.0, {{0, 1, a, SquareMatrix(2)}, {1, 5, SquareMatrix(2), SquareMatrix(2)}});
  EXPECT_TRUE(persistent_graph(brief, 5.0, 1.0).arcs().empty());
  EXPECT_THROW(persistent_graph(brief, 5.0, 0.0), ValidationError);

  const auto base = SquareMatrix::from_rows({{0, 0.5, 0}, {0.5, 0, 2}, {0, 2, 0}});
  const std::vector<double> active{1, 2, 1};
  const std::vector<double> silence{3, 3};
  const auto sc = scenarios::intermittent(base, active, silence);
  const double tau = 4.0;
  for (double thr : {1.0, 2.0, 2.5, 8.0, 9.0}) {
    const auto g = persistent_graph(sc.signal, sc.signal.horizon(), thr);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) { EXPECT_EQ(g.has_arc(j, i), base(i, j) > 0 && base(i, j) * tau >= thr); }
  }
}
