#include "lapdde/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lapdde/error.hpp"

namespace lapdde::scenarios {

namespace {

SquareMatrix uniform_delays(std::size_t n, double delay) {
  SquareMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) h(i, j) = delay;
    }
  }
  return h;
}

double max_entry(const SquareMatrix& m) {
  double v = 0.0;
  for (double x : m.data()) v = std::max(v, x);
  return v;
}

void require_delay(double delay) {
  if (!(delay >= 0.0) || !std::isfinite(delay)) throw ValidationError("delay: must be finite and >= 0");
}

}  // namespace

Scenario intermittent(const SquareMatrix& base, std::span<const double> active, std::span<const double> silence,
                      double delay) {
  require_delay(delay);
  const std::size_t n = base.size();
  if (n == 0) throw ValidationError("base: empty matrix");
  if (active.empty()) throw ValidationError("active: at least one burst required");
  if (silence.size() != active.size() && silence.size() + 1 != active.size()) {
    throw ValidationError("silence: expected one silence per burst (the last may be omitted)");
  }
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (!(active[k] > 0.0)) throw ValidationError("active[" + std::to_string(k) + "]: duration must be > 0");
  }
  for (std::size_t k = 0; k < silence.size(); ++k) {
    if (!(silence[k] >= 0.0)) throw ValidationError("silence[" + std::to_string(k) + "]: duration must be >= 0");
  }
  const SquareMatrix h = uniform_delays(n, delay);
  const SquareMatrix zero(n);
  std::vector<Segment> segs;
  std::vector<double> events;
  double t = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    events.push_back(t);
    segs.push_back({t, t + active[k], base, h});
    t += active[k];
    if (k < silence.size() && silence[k] > 0.0) {
      segs.push_back({t, t + silence[k], zero, h});
      t += silence[k];
    }
  }
  events.push_back(t);
  return {NetworkSignal(n, max_entry(base), delay, std::move(segs)), EventSequence(std::move(events))};
}

Scenario alternating_reciprocal(const AlternatingParams& p) {
  require_delay(p.delay);
  if (!(p.weight > 0.0)) throw ValidationError("weight: must be > 0");
  if (!(p.period > 0.0)) throw ValidationError("period: must be > 0");
  if (p.agents < 2) throw ValidationError("agents: chain needs at least 2 agents");
  if (p.cycles == 0) throw ValidationError("cycles: must be >= 1");
  if (!(p.period_growth >= 1.0)) throw ValidationError("period_growth: must be >= 1");
  if (p.period_growth > 1.0 && !p.max_period) {
    throw ValidationError(
        "period_growth: periods growing without bound make M = max_p int a_ij unbounded; set max_period to "
        "truncate the growth");
  }
  if (p.max_period && !(*p.max_period >= p.period)) throw ValidationError("max_period: must be >= period");

  const std::size_t n = p.agents;
  SquareMatrix forward(n), backward(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    forward(i, i + 1) = p.weight;   // arc i+1 -> i
    backward(i + 1, i) = p.weight;  // arc i -> i+1
  }
  const SquareMatrix h = uniform_delays(n, p.delay);
  std::vector<Segment> segs;
  std::vector<double> events;
  double t = 0.0;
  double period = p.period;
  for (std::size_t c = 0; c < p.cycles; ++c) {
    events.push_back(t);
    const double half = 0.5 * period;
    segs.push_back({t, t + half, forward, h});
    segs.push_back({t + half, t + period, backward, h});
    t += period;
    period = std::min(period * p.period_growth, p.max_period.value_or(period));
  }
  events.push_back(t);
  return {NetworkSignal(n, p.weight, p.delay, std::move(segs)), EventSequence(std::move(events))};
}

NetworkSignal imbalance_divergence(const ImbalanceParams& p) {
  require_delay(p.delay);
  if (p.rounds == 0) throw ValidationError("rounds: must be >= 1");
  if (!(p.round_length > 0.0)) throw ValidationError("round_length: must be > 0");
  if (!(p.a_bar > 0.0)) throw ValidationError("a_bar: must be > 0");
  if (p.exponents.size() != 3) throw ValidationError("exponents: expected 3 values");
  for (double e : p.exponents) {
    if (!(e > 0.0 && e <= 1.0)) throw ValidationError("exponents: each must lie in (0, 1] so integrals diverge");
  }
  constexpr std::size_t n = 3;
  const SquareMatrix h = uniform_delays(n, p.delay);
  std::vector<Segment> segs;
  for (std::size_t k = 1; k <= p.rounds; ++k) {
    SquareMatrix a(n);
    const bool reverse_active = (k & (k - 1)) == 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t next = (r + 1) % n;
      a(next, r) = p.a_bar * std::pow(static_cast<double>(k), -p.exponents[r]);  // arc r -> next
      if (reverse_active) a(r, next) = p.a_bar;                                    // arc next -> r
    }
    const double t = static_cast<double>(k - 1) * p.round_length;
    segs.push_back({t, t + p.round_length, std::move(a), h});
  }
  return NetworkSignal(n, p.a_bar, p.delay, std::move(segs));
}

NetworkSignal disconnected_clusters(std::span<const std::size_t> sizes, std::span<const double> intra_weights,
                                    double horizon, double delay) {
  require_delay(delay);
  if (sizes.size() < 2) throw ValidationError("sizes: at least 2 clusters required");
  if (intra_weights.size() != sizes.size()) throw ValidationError("intra_weights: one weight per cluster required");
  if (!(horizon > 0.0)) throw ValidationError("horizon: must be > 0");
  std::size_t n = 0;
  for (std::size_t s : sizes) {
    if (s == 0) throw ValidationError("sizes: clusters must be non-empty");
    n += s;
  }
  SquareMatrix a(n);
  std::size_t offset = 0;
  double a_bar = 0.0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (!(intra_weights[c] >= 0.0)) throw ValidationError("intra_weights: must be >= 0");
    for (std::size_t i = offset; i < offset + sizes[c]; ++i) {
      for (std::size_t j = offset; j < offset + sizes[c]; ++j) {
        if (i != j) a(i, j) = intra_weights[c];
      }
    }
    a_bar = std::max(a_bar, intra_weights[c]);
    offset += sizes[c];
  }
  return NetworkSignal(n, a_bar, delay, {{0.0, horizon, std::move(a), uniform_delays(n, delay)}});
}

NetworkSignal delayed_ring(std::size_t n, double weight, double delay, double horizon) {
  require_delay(delay);
  if (n < 2) throw ValidationError("n: ring needs at least 2 agents");
  if (!(weight >= 0.0)) throw ValidationError("weight: must be >= 0");
  if (!(horizon > 0.0)) throw ValidationError("horizon: must be > 0");
  SquareMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    a(i, next) = weight;
    a(next, i) = weight;
  }
  return NetworkSignal(n, weight, delay, {{0.0, horizon, std::move(a), uniform_delays(n, delay)}});
}

NetworkSignal random_signal(const RandomSignalParams& p) {
  if (p.agents == 0) throw ValidationError("agents: must be >= 1");
  if (p.segments == 0) throw ValidationError("segments: must be >= 1");
  if (!(p.horizon > 0.0)) throw ValidationError("horizon: must be > 0");
  if (p.type_symmetric_K && !(*p.type_symmetric_K >= 1.0)) throw ValidationError("type_symmetric_K: must be >= 1");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = p.agents;

  // Random segment lengths, normalized to the horizon.
  std::vector<double> lengths(p.segments);
  double total = 0.0;
  for (double& l : lengths) {
    l = 0.25 + unit(rng);
    total += l;
  }
  std::vector<Segment> segs;
  double t = 0.0;
  for (std::size_t s = 0; s < p.segments; ++s) {
    const double end = s + 1 == p.segments ? p.horizon : t + lengths[s] / total * p.horizon;
    SquareMatrix a(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        h(i, j) = p.h_bar * unit(rng);
        if (p.type_symmetric_K && j < i) continue;
        a(i, j) = unit(rng) < p.density ? p.a_bar * unit(rng) : 0.0;
      }
    }
    if (p.type_symmetric_K) {
      const double K = *p.type_symmetric_K;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          // ratio in [1/K, 1] keeps a_ij <= a_bar.
          const double ratio = K == 1.0 ? 1.0 : std::pow(K, -unit(rng));
          a(i, j) = a(j, i) * ratio;
        }
      }
    }
    segs.push_back({t, end, std::move(a), std::move(h)});
    t = end;
  }
  return NetworkSignal(n, p.a_bar, p.h_bar, std::move(segs));
}

ResidualSchedule random_residuals(std::size_t agents, double horizon, std::size_t pieces, double max_value,
                                  std::uint64_t seed) {
  if (!(max_value >= 0.0)) throw ValidationError("max_value: must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PiecewiseSchedule::Piece> out;
  if (pieces == 0) return ResidualSchedule(agents, {});
  const double width = horizon / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    PiecewiseSchedule::Piece piece;
    piece.t_start = static_cast<double>(k) * width;
    piece.t_end = k + 1 == pieces ? horizon : piece.t_start + width;
    piece.values.resize(agents);
    for (double& v : piece.values) v = unit(rng) < 0.5 ? 0.0 : max_value * unit(rng);
    out.push_back(std::move(piece));
  }
  return ResidualSchedule(agents, std::move(out));
}

}  // namespace lapdde::scenarios
