#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lapdde/signal.hpp"

namespace lapdde {

// Initial function phi on [t0 - h_bar, t0). Evaluated exactly by lookups; it
// may differ from the point value x(t0) = a.
class Prehistory {
 public:
  using Fn = std::function<double(std::size_t agent, double t)>;

  Prehistory() = default;
  Prehistory(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}

  static Prehistory constant(std::vector<double> values);
  static Prehistory zero(std::size_t n);

  std::size_t agents() const { return n_; }
  double operator()(std::size_t agent, double t) const { return fn_(agent, t); }

 private:
  std::size_t n_ = 0;
  Fn fn_;
};

// Position of a query time inside the sampled record.
struct LookupPoint {
  bool in_prehistory = false;
  std::size_t index = 0;  // left sample (main record)
  double w0 = 1.0;        // weight of sample `index`
  double w1 = 0.0;        // weight of sample `index + 1`
};

// Sampled solution over [t0 - h_bar, t_current]. Each sample stores n * lanes
// values laid out agent-major (value of agent i in lane b at i * lanes + b),
// so a batch of independent runs over one signal shares time samples.
//
// Samples before t0 are copies of phi on the grid t0 - m * step and only serve
// export and window extrema; lookups before t0 evaluate phi itself. Between
// samples from t0 on, values are piecewise-linear.
class TrajectoryHistory {
 public:
  TrajectoryHistory(std::size_t agents, std::size_t lanes, double t0, double step, double h_bar,
                    std::vector<Prehistory> prehistory);

  std::size_t agents() const { return n_; }
  std::size_t lanes() const { return lanes_; }
  double t0() const { return t0_; }
  double step() const { return step_; }
  // Extent of the prehistory record: samples exist back to t0 - covered_lag().
  double covered_lag() const { return covered_lag_; }
  double h_bar() const { return h_bar_; }

  // All sample times (prehistory samples first).
  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  // Index of the sample at t0.
  std::size_t first_index() const { return first_; }
  double current_time() const { return times_.back(); }

  std::span<const double> state(std::size_t k) const { return {values_.data() + k * width(), width()}; }
  double value(std::size_t k, std::size_t agent, std::size_t lane = 0) const {
    return values_[k * width() + agent * lanes_ + lane];
  }

  // Value of x_agent at time t in the given lane; piecewise-linear inside the
  // record, exact phi before t0. Throws RangeError outside [t0 - h_bar, now].
  double at(std::size_t agent, double t, std::size_t lane = 0) const;

  // Locates t in the main record (t >= t0) or flags it as prehistory.
  LookupPoint locate(double t) const;
  const Prehistory& prehistory(std::size_t lane) const { return prehistory_[lane]; }

  // Single-lane copy of one lane of a batch history.
  TrajectoryHistory lane(std::size_t b) const;

  // Engine interface: the record is append-only except for the newest sample.
  void append(double t, std::span<const double> state);
  std::span<double> mutable_back() { return {values_.data() + (times_.size() - 1) * width(), width()}; }
  const double* row_ptr(std::size_t k) const { return values_.data() + k * width(); }
  void reserve(std::size_t samples);

 private:
  std::size_t width() const { return n_ * lanes_; }

  std::size_t n_;
  std::size_t lanes_;
  double t0_;
  double step_;
  double h_bar_;
  double covered_lag_ = 0.0;
  std::size_t first_ = 0;
  std::vector<Prehistory> prehistory_;
  std::vector<double> times_;
  std::vector<double> values_;
};

// x_j(t - h_ij(t)) read from a single-lane history.
double lookup_delayed(const TrajectoryHistory& history, const NetworkSignal& signal, std::size_t i, std::size_t j,
                      double t);

}  // namespace lapdde
