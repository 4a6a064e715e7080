#include "lapdde/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lapdde/error.hpp"

namespace lapdde {

namespace {

std::string seg_path(std::size_t s) { return "segments[" + std::to_string(s) + "]"; }

void check_matrix(const SquareMatrix& m, std::size_t n, double bound, const std::string& path,
                  const char* what, const char* bound_name) {
  if (m.size() != n) {
    throw ValidationError(path + "." + what + ": expected " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix, got " + std::to_string(m.size()) + "x" +
                          std::to_string(m.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      const std::string where = path + "." + what + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!std::isfinite(v)) throw ValidationError(where + ": not finite");
      if (i == j && v != 0.0) throw ValidationError(where + ": diagonal entries must be zero");
      if (v < 0.0) throw ValidationError(where + ": negative value " + std::to_string(v));
      if (v > bound) {
        throw ValidationError(where + ": value " + std::to_string(v) + " exceeds " + bound_name + " = " +
                              std::to_string(bound));
      }
    }
  }
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) throw ValidationError("matrix: expected " + std::to_string(n * n) + " entries");
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ValidationError("matrix row " + std::to_string(i) + ": expected " + std::to_string(n) + " columns");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

NetworkSignal::NetworkSignal(std::size_t n, double a_bar, double h_bar, std::vector<Segment> segments)
    : n_(n), a_bar_(a_bar), h_bar_(h_bar), segments_(std::move(segments)) {
  if (n_ < 1) throw ValidationError("n: agent count must be >= 1");
  if (!(a_bar_ >= 0.0) || !std::isfinite(a_bar_)) throw ValidationError("a_bar: must be finite and >= 0");
  if (!(h_bar_ >= 0.0) || !std::isfinite(h_bar_)) throw ValidationError("h_bar: must be finite and >= 0");
  if (segments_.empty()) throw ValidationError("segments: at least one segment required");
  if (std::abs(segments_.front().t_start) > kTimeTolerance) {
    throw ValidationError("segments[0].t_start: first segment must start at 0");
  }
  segments_.front().t_start = 0.0;
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    Segment& seg = segments_[s];
    if (!(seg.t_end > seg.t_start + kTimeTolerance) || !std::isfinite(seg.t_end)) {
      throw ValidationError(seg_path(s) + ": t_end must exceed t_start");
    }
    if (s > 0) {
      const double prev_end = segments_[s - 1].t_end;
      if (std::abs(seg.t_start - prev_end) > kTimeTolerance) {
        throw ValidationError(seg_path(s) + ".t_start: segments must be contiguous (previous ends at " +
                              std::to_string(prev_end) + ")");
      }
      seg.t_start = prev_end;
    }
    check_matrix(seg.weights, n_, a_bar_, seg_path(s), "A", "a_bar");
    check_matrix(seg.delays, n_, h_bar_, seg_path(s), "H", "h_bar");
  }
}

std::size_t NetworkSignal::segment_index(double t) const {
  if (!(t >= -kTimeTolerance) || t > horizon() + kTimeTolerance) {
    throw RangeError("time " + std::to_string(t) + " outside signal horizon [0, " + std::to_string(horizon()) + "]");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t + kTimeTolerance,
                             [](double v, const Segment& s) { return v < s.t_start; });
  std::size_t idx = it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
  return std::min(idx, segments_.size() - 1);
}

std::vector<double> NetworkSignal::breakpoints() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.t_start);
  out.push_back(horizon());
  return out;
}

double weighted_degree(const NetworkSignal& signal, std::size_t i, double t) {
  if (i >= signal.agents()) throw RangeError("agent index " + std::to_string(i) + " out of range");
  const auto row = signal.segment_at(t).weights.row(i);
  double sum = 0.0;
  for (double a : row) sum += a;
  return sum;
}

EventSequence::EventSequence(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw ValidationError("events: empty event list");
  if (std::abs(times_.front()) > kTimeTolerance) throw ValidationError("events[0]: first event must be 0");
  times_.front() = 0.0;
  for (std::size_t p = 1; p < times_.size(); ++p) {
    if (!(times_[p] > times_[p - 1] + kTimeTolerance)) {
      throw ValidationError("events[" + std::to_string(p) + "]: event times must be strictly increasing");
    }
  }
}

EventSequence EventSequence::uniform(double period, double horizon, bool append_horizon) {
  if (!(period > 0.0)) throw ValidationError("events: period must be > 0");
  std::vector<double> t;
  for (std::size_t p = 0;; ++p) {
    const double tp = static_cast<double>(p) * period;
    if (tp > horizon + kTimeTolerance) break;
    t.push_back(std::min(tp, horizon));
  }
  if (append_horizon && t.back() < horizon - kTimeTolerance) t.push_back(horizon);
  return EventSequence(std::move(t));
}

PiecewiseSchedule::PiecewiseSchedule(std::size_t n, std::vector<Piece> pieces) : n_(n), pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.t_start < b.t_start; });
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& p = pieces_[k];
    const std::string path = "pieces[" + std::to_string(k) + "]";
    if (p.values.size() != n_) {
      throw ValidationError(path + ".values: expected " + std::to_string(n_) + " entries");
    }
    if (!(p.t_end > p.t_start)) throw ValidationError(path + ": t_end must exceed t_start");
    if (k > 0 && p.t_start < pieces_[k - 1].t_end - kTimeTolerance) {
      throw ValidationError(path + ": pieces overlap");
    }
    for (double v : p.values) {
      if (!std::isfinite(v)) throw ValidationError(path + ".values: not finite");
    }
  }
}

namespace {

// First piece whose end lies after t.
template <typename It>
It piece_after(It begin, It end, double t) {
  return std::upper_bound(begin, end, t, [](double v, const PiecewiseSchedule::Piece& p) { return v < p.t_end; });
}

}  // namespace

double PiecewiseSchedule::value(std::size_t i, double t) const {
  auto it = piece_after(pieces_.begin(), pieces_.end(), t + kTimeTolerance);
  if (it != pieces_.end() && t + kTimeTolerance >= it->t_start) return it->values[i];
  return 0.0;
}

void PiecewiseSchedule::values(double t, std::span<double> out) const {
  auto it = piece_after(pieces_.begin(), pieces_.end(), t + kTimeTolerance);
  if (it != pieces_.end() && t + kTimeTolerance >= it->t_start) {
    std::copy(it->values.begin(), it->values.end(), out.begin());
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

double PiecewiseSchedule::integral(std::size_t i, double t_a, double t_b) const {
  if (t_b < t_a) throw ValidationError("integral: reversed interval");
  double sum = 0.0;
  for (auto it = piece_after(pieces_.begin(), pieces_.end(), t_a); it != pieces_.end() && it->t_start < t_b; ++it) {
    const double lo = std::max(t_a, it->t_start);
    const double hi = std::min(t_b, it->t_end);
    if (hi > lo) sum += (hi - lo) * it->values[i];
  }
  return sum;
}

std::vector<double> PiecewiseSchedule::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(p.t_start);
    out.push_back(p.t_end);
  }
  return out;
}

ResidualSchedule::ResidualSchedule(std::size_t n, std::vector<PiecewiseSchedule::Piece> pieces)
    : schedule_(n, std::move(pieces)) {
  std::size_t k = 0;
  for (const auto& p : schedule_.pieces()) {
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      if (p.values[i] < 0.0) {
        throw ValidationError("residuals[" + std::to_string(k) + "].values[" + std::to_string(i) +
                              "]: residual must be nonnegative, got " + std::to_string(p.values[i]));
      }
    }
    ++k;
  }
}

}  // namespace lapdde
