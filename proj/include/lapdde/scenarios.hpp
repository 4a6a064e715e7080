#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lapdde/signal.hpp"

namespace lapdde::scenarios {

// A generated signal plus the event sequence it was designed around, if any.
struct Scenario {
  NetworkSignal signal;
  std::optional<EventSequence> events;
};

// Alternates A0 (burst k lasts active[k]) with silence (silence[k] follows
// burst k; the last silence may be omitted). Events sit at burst starts plus
// the horizon, so every event interval holds exactly one full burst.
Scenario intermittent(const SquareMatrix& base, std::span<const double> active, std::span<const double> silence,
                      double delay = 0.0);

struct AlternatingParams {
  double weight = 1.0;
  double period = 2.0;
  std::size_t cycles = 100;
  std::size_t agents = 2;  // chain 0 - 1 - ... - (agents-1)
  double delay = 0.0;
  // Period multiplier per cycle; > 1 requires max_period, which caps the
  // period (and with it M).
  double period_growth = 1.0;
  std::optional<double> max_period;
};

// Chain where every link acts in one direction during the first half of each
// period and in the other direction during the second half. Events at period
// boundaries.
Scenario alternating_reciprocal(const AlternatingParams& params);

struct ImbalanceParams {
  std::size_t rounds = 64;
  double round_length = 1.0;
  double a_bar = 1.0;
  // Decay exponents of the forward ring arcs 0->1, 1->2, 2->0.
  std::vector<double> exponents{0.25, 0.5, 0.75};
  double delay = 0.0;
};

// Three agents. In round k (1-based) the forward ring arcs carry
// a_bar * k^-exponent, while the reverse ring arcs carry a_bar only in rounds
// that are powers of two. Every arc integral diverges, at deliberately
// different rates, and the reverse direction is silent in most rounds.
NetworkSignal imbalance_divergence(const ImbalanceParams& params = {});

// Block-diagonal constant signal: cluster c is complete with weight
// intra_weights[c]; no arcs between clusters.
NetworkSignal disconnected_clusters(std::span<const std::size_t> sizes, std::span<const double> intra_weights,
                                    double horizon, double delay = 0.0);

// Constant undirected ring (arcs i <-> i+1 mod n) with weight w and uniform delay.
NetworkSignal delayed_ring(std::size_t n, double weight, double delay, double horizon);

struct RandomSignalParams {
  std::size_t agents = 3;
  std::size_t segments = 6;
  double a_bar = 1.0;
  double h_bar = 0.0;
  double horizon = 10.0;
  double density = 0.7;  // probability an off-diagonal weight is nonzero
  // When set, a_ji is drawn within a factor K of a_ij (pointwise
  // type-symmetric); K = 1 gives symmetric weights.
  std::optional<double> type_symmetric_K;
  std::uint64_t seed = 1;
};

NetworkSignal random_signal(const RandomSignalParams& params);

// Nonnegative piecewise-constant residuals on [0, horizon) with pieces
// random pieces of height at most max_value.
ResidualSchedule random_residuals(std::size_t agents, double horizon, std::size_t pieces, double max_value,
                                  std::uint64_t seed);

}  // namespace lapdde::scenarios
