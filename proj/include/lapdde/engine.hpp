#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lapdde/history.hpp"
#include "lapdde/kernels.hpp"
#include "lapdde/signal.hpp"

namespace lapdde {

struct SimulationConfig {
  double t0 = 0.0;
  double t_end = 0.0;
  double step = 0.0;
  std::vector<double> initial_point;  // a = x(t0)
  // phi on [t0 - h_bar, t0); defaults to the constant a when unset.
  std::optional<Prehistory> prehistory;
  std::optional<ResidualSchedule> residuals;
  std::optional<PiecewiseSchedule> forcing;
  // Extra instants added to the integration grid, e.g. to align the grids of
  // runs that are compared sample by sample.
  std::vector<double> grid_points;
};

// Throws ValidationError for dimension mismatches, a horizon outside the
// signal, or a step violating step <= h_bar/4 (h_bar > 0) or
// step <= 0.1/((n-1)*a_bar).
void validate_config(const NetworkSignal& signal, const SimulationConfig& config);

// Uniform grid t0 + k*step up to t_end with every breakpoint in (t0, t_end)
// inserted; instants closer than kTimeTolerance are merged onto the breakpoint.
std::vector<double> build_time_grid(double t0, double t_end, double step, std::vector<double> breakpoints);

// Consensus equations with delayed lookups (and the optional forcing term).
// Explicit trapezoidal (Heun) scheme on the grid above; weights, delays,
// residuals and forcing are frozen on each step, which never straddles a
// breakpoint. Under the step bound every update is a nonnegative combination
// of recorded values, so window extrema stay monotone on the discrete level.
TrajectoryHistory integrate_equation(const NetworkSignal& signal, const SimulationConfig& config,
                                     const simd::KernelTable* kernels = nullptr);

// Feasible solution of the delay differential inequality built from the
// residual schedule: dy_i/dt = sum_j a_ij (y_j(t - h_ij) - y_i) - Delta_i(t).
TrajectoryHistory integrate_inequality(const NetworkSignal& signal, const SimulationConfig& config,
                                       const simd::KernelTable* kernels = nullptr);

// Independent runs sharing signal, grid, residuals and forcing, one lane per
// initial point / prehistory pair. Lane b of the result equals the single run
// with that data bit for bit.
TrajectoryHistory integrate_batch(const NetworkSignal& signal, const SimulationConfig& config,
                                  std::span<const std::vector<double>> initial_points,
                                  std::vector<Prehistory> prehistories, const simd::KernelTable* kernels = nullptr);

// Sampled U(t, xi) for t >= xi: column k solves the equations with
// x(xi) = e_k and zero prehistory.
class EvolutionaryMatrix {
 public:
  EvolutionaryMatrix(double xi, TrajectoryHistory columns);

  double xi() const { return xi_; }
  std::size_t agents() const { return n_; }
  std::size_t samples() const { return history_.size() - history_.first_index(); }
  double time(std::size_t k) const { return history_.times()[history_.first_index() + k]; }
  // Row-major n x n matrix at sample k.
  std::span<const double> matrix(std::size_t k) const { return history_.state(history_.first_index() + k); }
  double entry(std::size_t k, std::size_t i, std::size_t j) const { return matrix(k)[i * n_ + j]; }
  double row_sum(std::size_t k, std::size_t i) const;
  double column_sum(std::size_t k, std::size_t j) const;
  // U(t, xi) interpolated between samples; zero for t < xi.
  std::vector<double> at(double t) const;

 private:
  double xi_;
  std::size_t n_;
  TrajectoryHistory history_;
};

EvolutionaryMatrix evolutionary_matrix(const NetworkSignal& signal, double xi, double t_end, double step,
                                       const simd::KernelTable* kernels = nullptr);

// Maximum over check instants t0 + m*quadrature_step of
//   || x(t|a,phi,f) - x(t|0,phi,0) - U(t,t0) a - sum_m U(t,xi_m) f(xi_m) dxi ||_inf
// with midpoint nodes xi_m. quadrature_step must be an integer multiple of
// config.step.
double cauchy_check(const NetworkSignal& signal, const SimulationConfig& config, double quadrature_step);

}  // namespace lapdde
