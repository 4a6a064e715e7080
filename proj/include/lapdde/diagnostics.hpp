#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lapdde/history.hpp"
#include "lapdde/signal.hpp"

namespace lapdde {

// lambda(t) / Lambda(t): min / max of all components over [t - h_bar, t],
// one entry per sample from t0 on. The record is piecewise-linear, so its
// extrema over a window are attained at samples or at the window's left edge;
// both are included.
struct WindowExtrema {
  std::vector<double> times;
  std::vector<double> lower;  // lambda
  std::vector<double> upper;  // Lambda
};

WindowExtrema window_extrema(const TrajectoryHistory& history, double h_bar);

// z_1(t) <= ... <= z_n(t) per sample; permutation[k][r] is the agent holding
// rank r. Ties go to the lower agent index first.
struct OrderedComponents {
  std::vector<double> times;
  std::vector<std::vector<double>> z;
  std::vector<std::vector<std::size_t>> permutation;
};

OrderedComponents ordered_components(const TrajectoryHistory& history);

// int_t^{t+T} Delta_i(xi) d xi for every grid time; values[k][i].
struct ResidualWindowCurve {
  double window = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  // Largest entry over all agents at times >= t_from.
  double max_after(double t_from) const;
};

ResidualWindowCurve residual_window_integral(const ResidualSchedule& residuals, double T,
                                             std::span<const double> grid);

enum class ConsensusOutcome { converged_common_limit, diverged_to_minus_infinity, not_converged_at_horizon };

std::string to_string(ConsensusOutcome outcome);

struct VerdictOptions {
  double tolerance = 1e-6;
  // Length of the final window; <= 0 selects 10% of the run.
  double window = 0.0;
  double floor = -1e6;
};

struct ConsensusVerdict {
  ConsensusOutcome outcome = ConsensusOutcome::not_converged_at_horizon;
  double c_star = 0.0;  // meaningful for converged_common_limit only
  double tolerance = 0.0;
  double window = 0.0;
  double floor = 0.0;
  double final_diameter = 0.0;
  // Earliest sample after which the diameter stays below tolerance.
  std::optional<double> time_to_tolerance;
  // False on the divergent branch: components need not synchronize there.
  bool synchrony_asserted = false;
};

ConsensusVerdict consensus_verdict(const TrajectoryHistory& history, const VerdictOptions& options = {});

struct MonotonicityViolation {
  double t = 0.0;
  double magnitude = 0.0;
};

// Increases of Lambda (and, when check_lower is set, decreases of lambda)
// larger than tolerance.
std::vector<MonotonicityViolation> monotonicity_violations(const WindowExtrema& extrema, double tolerance,
                                                           bool check_lower);

struct DiagnosticsReport {
  std::size_t agents = 0;
  double h_bar = 0.0;
  WindowExtrema extrema;
  OrderedComponents ordered;
  std::vector<double> diameter;  // z_n - z_1 per sample
  std::vector<ResidualWindowCurve> residual_windows;
  ConsensusVerdict verdict;
  double monotonicity_tolerance = 0.0;
  std::vector<MonotonicityViolation> monotonicity;
};

struct ReportOptions {
  VerdictOptions verdict;
  double monotonicity_tolerance = 1e-9;
  // Equation runs additionally check that lambda is non-decreasing.
  bool equation_run = true;
  std::vector<double> residual_windows{1.0, 5.0, 10.0};
};

DiagnosticsReport make_report(const TrajectoryHistory& history, const ResidualSchedule* residuals,
                              const ReportOptions& options = {});

}  // namespace lapdde
