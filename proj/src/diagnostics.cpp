#include "lapdde/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "lapdde/error.hpp"
#include "lapdde/kernels.hpp"

namespace lapdde {

namespace {

void require_single_lane(const TrajectoryHistory& history) {
  if (history.lanes() != 1) throw ValidationError("diagnostics: expected a single-lane history");
}

}  // namespace

WindowExtrema window_extrema(const TrajectoryHistory& history, double h_bar) {
  require_single_lane(history);
  if (h_bar < 0.0) throw ValidationError("h_bar: must be >= 0");
  if (h_bar > history.h_bar() + kTimeTolerance) {
    throw ValidationError("h_bar: window " + std::to_string(h_bar) + " exceeds the covered prehistory " +
                          std::to_string(history.h_bar()));
  }
  const auto& k = simd::active_kernels();
  const auto times = history.times();
  const std::size_t n = history.agents();
  std::vector<double> row_lo(times.size()), row_hi(times.size());
  for (std::size_t s = 0; s < times.size(); ++s) k.min_max(history.row_ptr(s), n, &row_lo[s], &row_hi[s]);

  WindowExtrema out;
  const std::size_t first = history.first_index();
  out.times.reserve(times.size() - first);
  out.lower.reserve(times.size() - first);
  out.upper.reserve(times.size() - first);

  // Monotonic deques of sample indices over the sliding window.
  std::deque<std::size_t> dq_hi, dq_lo;
  std::size_t left = 0;
  std::size_t next = 0;
  for (std::size_t s = first; s < times.size(); ++s) {
    const double t = times[s];
    while (next <= s) {
      while (!dq_hi.empty() && row_hi[dq_hi.back()] <= row_hi[next]) dq_hi.pop_back();
      dq_hi.push_back(next);
      while (!dq_lo.empty() && row_lo[dq_lo.back()] >= row_lo[next]) dq_lo.pop_back();
      dq_lo.push_back(next);
      ++next;
    }
    const double edge = t - h_bar;
    while (left < s && times[left] < edge - kTimeTolerance) ++left;
    while (dq_hi.front() < left) dq_hi.pop_front();
    while (dq_lo.front() < left) dq_lo.pop_front();
    double hi = row_hi[dq_hi.front()];
    double lo = row_lo[dq_lo.front()];
    if (h_bar > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        const double v = history.at(i, edge);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
    out.times.push_back(t);
    out.lower.push_back(lo);
    out.upper.push_back(hi);
  }
  return out;
}

OrderedComponents ordered_components(const TrajectoryHistory& history) {
  require_single_lane(history);
  const std::size_t n = history.agents();
  const auto times = history.times();
  OrderedComponents out;
  std::vector<std::size_t> idx(n);
  for (std::size_t s = history.first_index(); s < times.size(); ++s) {
    const auto x = history.state(s);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> z(n);
    for (std::size_t r = 0; r < n; ++r) z[r] = x[idx[r]];
    out.times.push_back(times[s]);
    out.z.push_back(std::move(z));
    out.permutation.push_back(idx);
  }
  return out;
}

double ResidualWindowCurve::max_after(double t_from) const {
  double m = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] + kTimeTolerance < t_from) continue;
    for (double v : values[k]) m = std::max(m, v);
  }
  return m;
}

ResidualWindowCurve residual_window_integral(const ResidualSchedule& residuals, double T,
                                             std::span<const double> grid) {
  if (!(T > 0.0)) throw ValidationError("T: window length must be > 0");
  ResidualWindowCurve out;
  out.window = T;
  out.times.assign(grid.begin(), grid.end());
  out.values.reserve(grid.size());
  const std::size_t n = residuals.agents();
  for (double t : grid) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = residuals.integral(i, t, t + T);
    out.values.push_back(std::move(v));
  }
  return out;
}

std::string to_string(ConsensusOutcome outcome) {
  switch (outcome) {
    case ConsensusOutcome::converged_common_limit:
      return "converged_common_limit";
    case ConsensusOutcome::diverged_to_minus_infinity:
      return "diverged_to_minus_infinity";
    case ConsensusOutcome::not_converged_at_horizon:
      return "not_converged_at_horizon";
  }
  return "unknown";
}

ConsensusVerdict consensus_verdict(const TrajectoryHistory& history, const VerdictOptions& options) {
  require_single_lane(history);
  if (!(options.tolerance > 0.0)) throw ValidationError("tolerance: must be > 0");
  const auto times = history.times();
  const std::size_t first = history.first_index();
  const double t_start = times[first];
  const double t_end = times.back();
  const double span = t_end - t_start;
  const double window = options.window > 0.0 ? options.window : 0.1 * span;
  if (window > span + kTimeTolerance) {
    throw ValidationError("window: " + std::to_string(window) + " is longer than the run (" +
                          std::to_string(span) + ")");
  }
  const std::size_t n = history.agents();
  const auto& k = simd::active_kernels();

  ConsensusVerdict v;
  v.tolerance = options.tolerance;
  v.window = window;
  v.floor = options.floor;

  std::vector<double> comp_lo(n, INFINITY), comp_hi(n, -INFINITY);
  bool diameter_ok = true;
  std::optional<double> settled;
  for (std::size_t s = first; s < times.size(); ++s) {
    double lo = 0.0, hi = 0.0;
    k.min_max(history.row_ptr(s), n, &lo, &hi);
    const double diam = hi - lo;
    if (diam < options.tolerance) {
      if (!settled) settled = times[s];
    } else {
      settled.reset();
    }
    if (times[s] + kTimeTolerance >= t_end - window) {
      diameter_ok = diameter_ok && diam < options.tolerance;
      for (std::size_t i = 0; i < n; ++i) {
        comp_lo[i] = std::min(comp_lo[i], history.value(s, i));
        comp_hi[i] = std::max(comp_hi[i], history.value(s, i));
      }
    }
    v.final_diameter = diam;
  }
  v.time_to_tolerance = settled;

  bool oscillation_ok = true;
  for (std::size_t i = 0; i < n; ++i) oscillation_ok = oscillation_ok && comp_hi[i] - comp_lo[i] < options.tolerance;

  if (diameter_ok && oscillation_ok) {
    const auto last = history.state(times.size() - 1);
    v.outcome = ConsensusOutcome::converged_common_limit;
    v.c_star = std::accumulate(last.begin(), last.end(), 0.0) / static_cast<double>(n);
    v.synchrony_asserted = true;
    return v;
  }
  const WindowExtrema ex = window_extrema(history, history.h_bar());
  if (ex.upper.back() < options.floor) {
    v.outcome = ConsensusOutcome::diverged_to_minus_infinity;
    v.c_star = -INFINITY;
    return v;
  }
  v.outcome = ConsensusOutcome::not_converged_at_horizon;
  return v;
}

std::vector<MonotonicityViolation> monotonicity_violations(const WindowExtrema& extrema, double tolerance,
                                                           bool check_lower) {
  std::vector<MonotonicityViolation> out;
  for (std::size_t s = 1; s < extrema.times.size(); ++s) {
    const double up = extrema.upper[s] - extrema.upper[s - 1];
    if (up > tolerance) out.push_back({extrema.times[s], up});
    if (check_lower) {
      const double down = extrema.lower[s - 1] - extrema.lower[s];
      if (down > tolerance) out.push_back({extrema.times[s], down});
    }
  }
  return out;
}

DiagnosticsReport make_report(const TrajectoryHistory& history, const ResidualSchedule* residuals,
                              const ReportOptions& options) {
  DiagnosticsReport r;
  r.agents = history.agents();
  r.h_bar = history.h_bar();
  r.extrema = window_extrema(history, history.h_bar());
  r.ordered = ordered_components(history);
  r.diameter.reserve(r.ordered.z.size());
  for (const auto& z : r.ordered.z) r.diameter.push_back(z.back() - z.front());
  if (residuals != nullptr) {
    for (double T : options.residual_windows) r.residual_windows.push_back(residual_window_integral(*residuals, T, r.extrema.times));
  }
  r.verdict = consensus_verdict(history, options.verdict);
  r.monotonicity_tolerance = options.monotonicity_tolerance;
  r.monotonicity = monotonicity_violations(r.extrema, options.monotonicity_tolerance, options.equation_run);
  return r;
}

}  // namespace lapdde
