#include "lapdde/history.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lapdde/error.hpp"

namespace lapdde {

Prehistory Prehistory::constant(std::vector<double> values) {
  const std::size_t n = values.size();
  return Prehistory(n, [v = std::move(values)](std::size_t agent, double) { return v[agent]; });
}

Prehistory Prehistory::zero(std::size_t n) {
  return Prehistory(n, [](std::size_t, double) { return 0.0; });
}

TrajectoryHistory::TrajectoryHistory(std::size_t agents, std::size_t lanes, double t0, double step, double h_bar,
                                     std::vector<Prehistory> prehistory)
    : n_(agents), lanes_(lanes), t0_(t0), step_(step), h_bar_(h_bar), prehistory_(std::move(prehistory)) {
  if (n_ == 0 || lanes_ == 0) throw ValidationError("history: agents and lanes must be >= 1");
  if (!(step_ > 0.0)) throw ValidationError("history: step must be > 0");
  if (h_bar_ < 0.0) throw ValidationError("history: h_bar must be >= 0");
  if (prehistory_.size() != lanes_) throw ValidationError("history: one prehistory per lane required");
  for (const auto& p : prehistory_) {
    if (p.agents() != n_) throw ValidationError("history: prehistory dimension mismatch");
  }
  const auto m = static_cast<std::size_t>(std::ceil(h_bar_ / step_ - 1e-9));
  covered_lag_ = static_cast<double>(m) * step_;
  times_.reserve(m + 1);
  values_.reserve((m + 1) * width());
  for (std::size_t k = m; k >= 1; --k) {
    const double t = t0_ - static_cast<double>(k) * step_;
    times_.push_back(t);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t b = 0; b < lanes_; ++b) values_.push_back(prehistory_[b](i, t));
    }
  }
  first_ = times_.size();
}

void TrajectoryHistory::reserve(std::size_t samples) {
  times_.reserve(first_ + samples);
  values_.reserve((first_ + samples) * width());
}

void TrajectoryHistory::append(double t, std::span<const double> state) {
  if (state.size() != width()) throw ValidationError("history: state width mismatch");
  if (times_.size() > first_ && !(t > times_.back())) throw ValidationError("history: times must increase");
  times_.push_back(t);
  values_.insert(values_.end(), state.begin(), state.end());
}

LookupPoint TrajectoryHistory::locate(double t) const {
  if (times_.size() <= first_) throw RangeError("history: no samples recorded from t0");
  if (t < t0_ - kTimeTolerance) {
    if (t < t0_ - h_bar_ - kTimeTolerance) {
      throw RangeError("history: lookup at t=" + std::to_string(t) + " precedes the covered interval [" +
                       std::to_string(t0_ - h_bar_) + ", " + std::to_string(times_.back()) + "]; missing [" +
                       std::to_string(t) + ", " + std::to_string(t0_ - h_bar_) + ")");
    }
    return {true, 0, 0.0, 0.0};
  }
  const double last = times_.back();
  if (t > last + kTimeTolerance) {
    throw RangeError("history: lookup at t=" + std::to_string(t) + " is beyond the recorded time " +
                     std::to_string(last) + "; missing (" + std::to_string(last) + ", " + std::to_string(t) + "]");
  }
  auto begin = times_.begin() + static_cast<std::ptrdiff_t>(first_);
  // First sample strictly after t (within tolerance).
  auto it = std::upper_bound(begin, times_.end(), t + kTimeTolerance);
  std::size_t right = static_cast<std::size_t>(it - times_.begin());
  std::size_t left = right - 1;
  if (std::abs(times_[left] - t) <= kTimeTolerance || right == times_.size()) return {false, left, 1.0, 0.0};
  const double w1 = (t - times_[left]) / (times_[right] - times_[left]);
  return {false, left, 1.0 - w1, w1};
}

double TrajectoryHistory::at(std::size_t agent, double t, std::size_t lane) const {
  if (agent >= n_ || lane >= lanes_) throw RangeError("history: agent or lane index out of range");
  const LookupPoint p = locate(t);
  if (p.in_prehistory) return prehistory_[lane](agent, t);
  const double v0 = value(p.index, agent, lane);
  if (p.w1 == 0.0) return v0;
  return p.w0 * v0 + p.w1 * value(p.index + 1, agent, lane);
}

TrajectoryHistory TrajectoryHistory::lane(std::size_t b) const {
  if (b >= lanes_) throw RangeError("history: lane index out of range");
  TrajectoryHistory out(n_, 1, t0_, step_, h_bar_, {prehistory_[b]});
  out.reserve(times_.size() - first_);
  std::vector<double> row(n_);
  for (std::size_t k = first_; k < times_.size(); ++k) {
    for (std::size_t i = 0; i < n_; ++i) row[i] = value(k, i, b);
    out.append(times_[k], row);
  }
  return out;
}

double lookup_delayed(const TrajectoryHistory& history, const NetworkSignal& signal, std::size_t i, std::size_t j,
                      double t) {
  if (i >= signal.agents() || j >= signal.agents()) throw RangeError("lookup_delayed: agent index out of range");
  return history.at(j, t - signal.delay(i, j, t));
}

}  // namespace lapdde
