#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lapdde {

// Absolute tolerance used when matching time instants (segment boundaries,
// grid points, window edges).
inline constexpr double kTimeTolerance = 1e-12;

// Dense row-major n x n matrix. Row i holds the influences ON agent i.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  SquareMatrix(std::size_t n, std::vector<double> row_major);

  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  SquareMatrix weights;  // a_ij on [t_start, t_end)
  SquareMatrix delays;   // h_ij on [t_start, t_end)
};

// Piecewise-constant pair (A(t), H(t)) on [0, horizon). Immutable once built;
// the constructor enforces 0 <= a_ij <= a_bar, 0 <= h_ij <= h_bar, zero
// diagonals and contiguous segments starting at 0.
class NetworkSignal {
 public:
  NetworkSignal(std::size_t n, double a_bar, double h_bar, std::vector<Segment> segments);

  std::size_t agents() const { return n_; }
  double a_bar() const { return a_bar_; }
  double h_bar() const { return h_bar_; }
  double horizon() const { return segments_.back().t_end; }
  std::span<const Segment> segments() const { return segments_; }

  // Index of the segment active at t (right-continuous; t == horizon maps to
  // the last segment). Throws RangeError outside [0, horizon].
  std::size_t segment_index(double t) const;
  const Segment& segment_at(double t) const { return segments_[segment_index(t)]; }

  double weight(std::size_t i, std::size_t j, double t) const { return segment_at(t).weights(i, j); }
  double delay(std::size_t i, std::size_t j, double t) const { return segment_at(t).delays(i, j); }

  // Interior switching instants plus 0 and the horizon.
  std::vector<double> breakpoints() const;

 private:
  std::size_t n_;
  double a_bar_;
  double h_bar_;
  std::vector<Segment> segments_;
};

// alpha_i(t) = sum_j a_ij(t).
double weighted_degree(const NetworkSignal& signal, std::size_t i, double t);

// Strictly increasing 0 = t_0 < t_1 < ... (finite truncation).
class EventSequence {
 public:
  explicit EventSequence(std::vector<double> times);

  // t_p = p * period for every t_p <= horizon (horizon appended if it is not
  // already a grid point and append_horizon is set).
  static EventSequence uniform(double period, double horizon, bool append_horizon = false);

  std::span<const double> times() const { return times_; }
  std::size_t intervals() const { return times_.size() - 1; }

 private:
  std::vector<double> times_;
};

// Piecewise-constant vector function of time, zero outside its pieces.
// Used for residual schedules (nonnegative) and forcing terms (signed).
class PiecewiseSchedule {
 public:
  struct Piece {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> values;
  };

  PiecewiseSchedule() = default;
  PiecewiseSchedule(std::size_t n, std::vector<Piece> pieces);

  std::size_t agents() const { return n_; }
  std::span<const Piece> pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  double value(std::size_t i, double t) const;
  void values(double t, std::span<double> out) const;
  // Exact integral of component i over [t_a, t_b].
  double integral(std::size_t i, double t_a, double t_b) const;
  std::vector<double> breakpoints() const;

 private:
  std::size_t n_ = 0;
  std::vector<Piece> pieces_;  // sorted, non-overlapping
};

// Delta_i(t) >= 0: the slack turning the consensus equation into a feasible
// solution of the associated delay differential inequality.
class ResidualSchedule {
 public:
  ResidualSchedule() = default;
  ResidualSchedule(std::size_t n, std::vector<PiecewiseSchedule::Piece> pieces);

  static ResidualSchedule zero(std::size_t n) { return ResidualSchedule(n, {}); }

  const PiecewiseSchedule& schedule() const { return schedule_; }
  std::size_t agents() const { return schedule_.agents(); }
  double value(std::size_t i, double t) const { return schedule_.value(i, t); }
  double integral(std::size_t i, double t_a, double t_b) const { return schedule_.integral(i, t_a, t_b); }

 private:
  PiecewiseSchedule schedule_;
};

}  // namespace lapdde
