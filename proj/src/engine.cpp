#include "lapdde/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lapdde/error.hpp"

namespace lapdde {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Per-segment lookup plan: distinct delay values and, for every coupled pair,
// which distinct delay it uses.
struct SegmentPlan {
  struct Pair {
    std::size_t i;
    std::size_t j;
    double weight;
    double delay;
    std::size_t slot;
  };
  std::vector<double> delays;
  std::vector<Pair> pairs;  // grouped by i
};

SegmentPlan make_plan(const Segment& seg) {
  SegmentPlan plan;
  const std::size_t n = seg.weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = seg.weights(i, j);
      if (i == j || a == 0.0) continue;
      const double h = seg.delays(i, j);
      auto it = std::find(plan.delays.begin(), plan.delays.end(), h);
      std::size_t slot = static_cast<std::size_t>(it - plan.delays.begin());
      if (it == plan.delays.end()) plan.delays.push_back(h);
      plan.pairs.push_back({i, j, a, h, slot});
    }
  }
  return plan;
}

class Integrator {
 public:
  Integrator(const NetworkSignal& signal, const SimulationConfig& config, const simd::KernelTable& kernels,
             std::span<const std::vector<double>> initial, std::vector<Prehistory> prehistory)
      : signal_(signal),
        config_(config),
        k_(kernels),
        n_(signal.agents()),
        lanes_(initial.size()),
        history_(n_, lanes_, config.t0, config.step, signal.h_bar(), std::move(prehistory)) {
    std::vector<double> breaks = signal.breakpoints();
    if (config.residuals) {
      const auto b = config.residuals->schedule().breakpoints();
      breaks.insert(breaks.end(), b.begin(), b.end());
    }
    if (config.forcing) {
      const auto b = config.forcing->breakpoints();
      breaks.insert(breaks.end(), b.begin(), b.end());
    }
    breaks.insert(breaks.end(), config.grid_points.begin(), config.grid_points.end());
    grid_ = build_time_grid(config.t0, config.t_end, config.step, std::move(breaks));

    std::vector<double> x0(n_ * lanes_);
    for (std::size_t b = 0; b < lanes_; ++b) {
      for (std::size_t i = 0; i < n_; ++i) x0[i * lanes_ + b] = initial[b][i];
    }
    history_.reserve(grid_.size());
    history_.append(grid_.front(), x0);
  }

  TrajectoryHistory run() && {
    const std::size_t w = n_ * lanes_;
    std::vector<double> f1(w), f2(w), buf(w), shift(n_), forcing(n_);
    scratch_.assign(lanes_, 0.0);
    std::size_t plan_segment = static_cast<std::size_t>(-1);
    SegmentPlan plan;

    for (std::size_t s = 0; s + 1 < grid_.size(); ++s) {
      const double tk = grid_[s];
      const double tk1 = grid_[s + 1];
      const double dt = tk1 - tk;
      const double mid = 0.5 * (tk + tk1);
      const std::size_t seg = signal_.segment_index(mid);
      if (seg != plan_segment) {
        plan = make_plan(signal_.segments()[seg]);
        plan_segment = seg;
        slots_.resize(plan.delays.size());
      }
      std::fill(shift.begin(), shift.end(), 0.0);
      if (config_.forcing) {
        config_.forcing->values(mid, forcing);
        for (std::size_t i = 0; i < n_; ++i) shift[i] += forcing[i];
      }
      if (config_.residuals) {
        for (std::size_t i = 0; i < n_; ++i) shift[i] -= config_.residuals->value(i, mid);
      }

      const std::size_t kx = history_.size() - 1;
      coupling(plan, tk, history_.row_ptr(kx), f1.data());
      const double* x = history_.row_ptr(kx);
      for (std::size_t i = 0; i < n_; ++i) {
        k_.heun_predict(buf.data() + i * lanes_, x + i * lanes_, f1.data() + i * lanes_, dt, shift[i], lanes_);
      }
      history_.append(tk1, buf);

      coupling(plan, tk1, history_.row_ptr(kx + 1), f2.data());
      x = history_.row_ptr(kx);
      const double half_dt = 0.5 * dt;
      for (std::size_t i = 0; i < n_; ++i) {
        k_.heun_correct(buf.data() + i * lanes_, x + i * lanes_, f1.data() + i * lanes_, f2.data() + i * lanes_,
                        half_dt, dt, shift[i], lanes_);
      }
      auto back = history_.mutable_back();
      std::copy(buf.begin(), buf.end(), back.begin());
    }
    return std::move(history_);
  }

 private:
  // out[i] = sum_j a_ij (x_j(t - h_ij) - self_i), lane-wise.
  void coupling(const SegmentPlan& plan, double t, const double* self, double* out) {
    std::fill(out, out + n_ * lanes_, 0.0);
    for (std::size_t d = 0; d < plan.delays.size(); ++d) slots_[d] = history_.locate(t - plan.delays[d]);
    for (const auto& p : plan.pairs) {
      const LookupPoint& lp = slots_[p.slot];
      double* acc = out + p.i * lanes_;
      const double* own = self + p.i * lanes_;
      if (lp.in_prehistory) {
        const double q = t - p.delay;
        for (std::size_t b = 0; b < lanes_; ++b) scratch_[b] = history_.prehistory(b)(p.j, q);
        k_.accumulate_coupling(acc, p.weight, 1.0, scratch_.data(), 0.0, scratch_.data(), own, lanes_);
      } else {
        const double* r0 = history_.row_ptr(lp.index) + p.j * lanes_;
        const double* r1 = lp.w1 != 0.0 ? history_.row_ptr(lp.index + 1) + p.j * lanes_ : r0;
        k_.accumulate_coupling(acc, p.weight, lp.w0, r0, lp.w1, r1, own, lanes_);
      }
    }
  }

  const NetworkSignal& signal_;
  const SimulationConfig& config_;
  const simd::KernelTable& k_;
  std::size_t n_;
  std::size_t lanes_;
  TrajectoryHistory history_;
  std::vector<double> grid_;
  std::vector<LookupPoint> slots_;
  std::vector<double> scratch_;
};

const simd::KernelTable& pick(const simd::KernelTable* kernels) {
  return kernels != nullptr ? *kernels : simd::active_kernels();
}

}  // namespace

std::vector<double> build_time_grid(double t0, double t_end, double step, std::vector<double> breakpoints) {
  if (!(step > 0.0)) throw ValidationError("step: must be > 0");
  if (!(t_end > t0)) throw ValidationError("t_end: must exceed t0");
  const auto count = static_cast<std::size_t>(std::ceil((t_end - t0) / step - 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 1 + breakpoints.size());
  for (std::size_t k = 0; k < count; ++k) grid.push_back(t0 + static_cast<double>(k) * step);
  grid.push_back(t_end);

  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b <= t0 + kTimeTolerance || b >= t_end - kTimeTolerance) continue;
    auto it = std::lower_bound(grid.begin(), grid.end(), b);
    if (it != grid.end() && std::abs(*it - b) <= kTimeTolerance) {
      *it = b;
    } else if (it != grid.begin() && std::abs(*(it - 1) - b) <= kTimeTolerance) {
      *(it - 1) = b;
    } else {
      grid.insert(it, b);
    }
  }
  return grid;
}

void validate_config(const NetworkSignal& signal, const SimulationConfig& config) {
  const std::size_t n = signal.agents();
  if (config.initial_point.size() != n) {
    throw ValidationError("integration.initial: expected " + std::to_string(n) + " values, got " +
                          std::to_string(config.initial_point.size()));
  }
  if (config.prehistory && config.prehistory->agents() != n) {
    throw ValidationError("integration.prehistory: dimension mismatch with n = " + std::to_string(n));
  }
  if (!(config.step > 0.0)) throw ValidationError("integration.step: must be > 0");
  if (!(config.t0 >= 0.0)) throw ValidationError("integration.t0: must be >= 0");
  if (!(config.t_end > config.t0)) throw ValidationError("integration.t_end: must exceed t0");
  if (config.t_end > signal.horizon() + kTimeTolerance) {
    throw ValidationError("integration.t_end: " + fmt(config.t_end) + " exceeds the signal horizon " +
                          fmt(signal.horizon()));
  }
  const double slack = 1.0 + 1e-12;
  if (signal.h_bar() > 0.0 && config.step > signal.h_bar() / 4.0 * slack) {
    throw ValidationError("integration.step: " + fmt(config.step) +
                          " violates the delay resolution bound step <= h_bar/4 = " + fmt(signal.h_bar() / 4.0));
  }
  if (n > 1 && signal.a_bar() > 0.0) {
    const double bound = 0.1 / (static_cast<double>(n - 1) * signal.a_bar());
    if (config.step > bound * slack) {
      throw ValidationError("integration.step: " + fmt(config.step) +
                            " violates the stability bound step <= 0.1/((n-1)*a_bar) = " + fmt(bound));
    }
  }
  if (config.residuals && config.residuals->agents() != n) {
    throw ValidationError("residuals: dimension mismatch with n = " + std::to_string(n));
  }
  if (config.forcing && config.forcing->agents() != n) {
    throw ValidationError("forcing: dimension mismatch with n = " + std::to_string(n));
  }
}

TrajectoryHistory integrate_batch(const NetworkSignal& signal, const SimulationConfig& config,
                                  std::span<const std::vector<double>> initial_points,
                                  std::vector<Prehistory> prehistories, const simd::KernelTable* kernels) {
  if (initial_points.empty()) throw ValidationError("batch: at least one lane required");
  if (prehistories.size() != initial_points.size()) throw ValidationError("batch: one prehistory per lane required");
  SimulationConfig probe = config;
  for (std::size_t b = 0; b < initial_points.size(); ++b) {
    probe.initial_point = initial_points[b];
    probe.prehistory = prehistories[b];
    validate_config(signal, probe);
  }
  return Integrator(signal, config, pick(kernels), initial_points, std::move(prehistories)).run();
}

namespace {

TrajectoryHistory integrate_single(const NetworkSignal& signal, const SimulationConfig& config,
                                   const simd::KernelTable* kernels) {
  std::vector<std::vector<double>> initial{config.initial_point};
  std::vector<Prehistory> pre{config.prehistory ? *config.prehistory : Prehistory::constant(config.initial_point)};
  return integrate_batch(signal, config, initial, std::move(pre), kernels);
}

}  // namespace

TrajectoryHistory integrate_equation(const NetworkSignal& signal, const SimulationConfig& config,
                                     const simd::KernelTable* kernels) {
  if (config.residuals) {
    throw ValidationError("residuals: integrate_equation takes no residual schedule; use integrate_inequality");
  }
  return integrate_single(signal, config, kernels);
}

TrajectoryHistory integrate_inequality(const NetworkSignal& signal, const SimulationConfig& config,
                                       const simd::KernelTable* kernels) {
  if (!config.residuals) throw ValidationError("residuals: integrate_inequality requires a residual schedule");
  return integrate_single(signal, config, kernels);
}

EvolutionaryMatrix::EvolutionaryMatrix(double xi, TrajectoryHistory columns)
    : xi_(xi), n_(columns.agents()), history_(std::move(columns)) {
  if (history_.lanes() != n_) throw ValidationError("evolutionary matrix: expected one lane per agent");
}

double EvolutionaryMatrix::row_sum(std::size_t k, std::size_t i) const {
  const auto m = matrix(k);
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += m[i * n_ + j];
  return s;
}

double EvolutionaryMatrix::column_sum(std::size_t k, std::size_t j) const {
  const auto m = matrix(k);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += m[i * n_ + j];
  return s;
}

std::vector<double> EvolutionaryMatrix::at(double t) const {
  std::vector<double> out(n_ * n_, 0.0);
  if (t < xi_ - kTimeTolerance) return out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] = history_.at(i, t, j);
  }
  return out;
}

EvolutionaryMatrix evolutionary_matrix(const NetworkSignal& signal, double xi, double t_end, double step,
                                       const simd::KernelTable* kernels) {
  const std::size_t n = signal.agents();
  SimulationConfig config;
  config.t0 = xi;
  config.t_end = t_end;
  config.step = step;
  std::vector<std::vector<double>> basis(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) basis[k][k] = 1.0;
  std::vector<Prehistory> zero(n, Prehistory::zero(n));
  return EvolutionaryMatrix(xi, integrate_batch(signal, config, basis, std::move(zero), kernels));
}

double cauchy_check(const NetworkSignal& signal, const SimulationConfig& config, double quadrature_step) {
  validate_config(signal, config);
  if (config.residuals) throw ValidationError("residuals: cauchy_check applies to the equations only");
  if (!(quadrature_step > 0.0)) throw ValidationError("quadrature_step: must be > 0");
  const double ratio = quadrature_step / config.step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1.0) {
    throw ValidationError("quadrature_step: " + fmt(quadrature_step) + " is not an integer multiple of step " +
                          fmt(config.step) + " (grids misaligned)");
  }
  const std::size_t n = signal.agents();
  const double span = config.t_end - config.t0;
  const auto cells = static_cast<std::size_t>(std::floor(span / quadrature_step + 1e-9));
  if (cells == 0) throw ValidationError("quadrature_step: exceeds the integration interval");

  SimulationConfig forced = config;
  SimulationConfig free = config;
  free.forcing.reset();
  free.initial_point.assign(n, 0.0);
  if (config.forcing) {
    const auto b = config.forcing->breakpoints();
    free.grid_points.insert(free.grid_points.end(), b.begin(), b.end());
  }
  if (!free.prehistory) free.prehistory = Prehistory::constant(config.initial_point);
  if (!forced.prehistory) forced.prehistory = free.prehistory;

  const TrajectoryHistory x_forced = integrate_equation(signal, forced);
  const TrajectoryHistory x_free = integrate_equation(signal, free);
  const EvolutionaryMatrix u0 = evolutionary_matrix(signal, config.t0, config.t_end, config.step);

  std::vector<EvolutionaryMatrix> nodes;
  std::vector<std::vector<double>> node_forcing;
  nodes.reserve(cells);
  for (std::size_t m = 0; m < cells; ++m) {
    const double xi = config.t0 + (static_cast<double>(m) + 0.5) * quadrature_step;
    nodes.push_back(evolutionary_matrix(signal, xi, config.t_end, config.step));
    std::vector<double> f(n, 0.0);
    if (config.forcing) config.forcing->values(xi, f);
    node_forcing.push_back(std::move(f));
  }

  double worst = 0.0;
  for (std::size_t c = 1; c <= cells; ++c) {
    const double t = config.t0 + static_cast<double>(c) * quadrature_step;
    const auto u = u0.at(t);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) rhs[i] += u[i * n + j] * config.initial_point[j];
    }
    for (std::size_t m = 0; m < c; ++m) {
      const auto um = nodes[m].at(t);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rhs[i] += um[i * n + j] * node_forcing[m][j] * quadrature_step;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = x_forced.at(i, t) - x_free.at(i, t) - rhs[i];
      worst = std::max(worst, std::abs(dev));
    }
  }
  return worst;
}

}  // namespace lapdde
