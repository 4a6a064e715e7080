#include "lapdde/graph.hpp"

#include <algorithm>
#include <string>

#include "lapdde/error.hpp"

namespace lapdde {

namespace {

// Relative slack for ratio comparisons between integrals computed along
// different summation orders.
constexpr double kRatioSlack = 1e-12;

bool ratio_ok(double a, double b, double K) {
  // a <= K b and b <= K a, with 0 <= 0 passing.
  const double scale = std::max(a, b);
  const double slack = kRatioSlack * scale;
  return a <= K * b + slack && b <= K * a + slack;
}

// Complete event intervals [t_p, t_{p+1}] inside the signal horizon.
std::size_t usable_intervals(const NetworkSignal& signal, const EventSequence& events) {
  const auto t = events.times();
  std::size_t count = 0;
  for (std::size_t p = 0; p + 1 < t.size(); ++p) {
    if (t[p + 1] > signal.horizon() + kTimeTolerance) break;
    ++count;
  }
  return count;
}

}  // namespace

void DirectedGraph::add_arc(std::size_t from, std::size_t to) {
  if (from >= n_ || to >= n_) throw RangeError("arc endpoint out of range");
  if (from == to || has_arc(from, to)) return;
  out_[from].push_back(to);
}

bool DirectedGraph::has_arc(std::size_t from, std::size_t to) const {
  const auto& s = out_[from];
  return std::find(s.begin(), s.end(), to) != s.end();
}

std::vector<std::pair<std::size_t, std::size_t>> DirectedGraph::arcs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < n_; ++v) {
    for (std::size_t w : out_[v]) out.emplace_back(v, w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DirectedGraph graph_of(const SquareMatrix& weights, double threshold) {
  DirectedGraph g(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = 0; j < weights.size(); ++j) {
      if (i != j && weights(i, j) > threshold) g.add_arc(j, i);
    }
  }
  return g;
}

std::vector<std::size_t> strong_components(const DirectedGraph& g, std::size_t* count) {
  // Iterative Tarjan.
  const std::size_t n = g.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next successor position)
  std::size_t next_index = 0;
  std::size_t next_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& succ = g.successors(v);
      if (pos < succ.size()) {
        const std::size_t w = succ[pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != done);
        ++next_comp;
      }
    }
  }
  if (count != nullptr) *count = next_comp;
  return comp;
}

bool strongly_connected(const DirectedGraph& g) {
  if (g.size() <= 1) return true;
  std::size_t count = 0;
  strong_components(g, &count);
  return count == 1;
}

QuasiStrongResult quasi_strongly_connected(const DirectedGraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  std::size_t count = 0;
  const auto comp = strong_components(g, &count);
  // A root exists iff the condensation has exactly one component without
  // incoming arcs from other components.
  std::vector<bool> has_in(count, false);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : g.successors(v)) {
      if (comp[v] != comp[w]) has_in[comp[w]] = true;
    }
  }
  std::size_t sources = 0;
  std::size_t source = 0;
  for (std::size_t c = 0; c < count; ++c) {
    if (!has_in[c]) {
      ++sources;
      source = c;
    }
  }
  if (sources != 1) return {false, std::nullopt};
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] == source) return {true, v};
  }
  return {false, std::nullopt};
}

bool weakly_connected(const DirectedGraph& g) {
  const std::size_t n = g.size();
  if (n <= 1) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : g.successors(v)) {
      adj[v].push_back(w);
      adj[w].push_back(v);
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> todo{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!todo.empty()) {
    const std::size_t v = todo.back();
    todo.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        todo.push_back(w);
      }
    }
  }
  return reached == n;
}

double interval_integral(const NetworkSignal& signal, std::size_t i, std::size_t j, double t_a, double t_b) {
  if (t_b < t_a) {
    throw ValidationError("interval_integral: reversed interval [" + std::to_string(t_a) + ", " +
                          std::to_string(t_b) + "]");
  }
  if (t_a < -kTimeTolerance || t_b > signal.horizon() + kTimeTolerance) {
    throw RangeError("interval_integral: interval outside the signal horizon");
  }
  if (i >= signal.agents() || j >= signal.agents()) throw RangeError("interval_integral: agent index out of range");
  double sum = 0.0;
  for (const auto& seg : signal.segments()) {
    if (seg.t_end <= t_a) continue;
    if (seg.t_start >= t_b) break;
    const double lo = std::max(t_a, seg.t_start);
    const double hi = std::min(t_b, seg.t_end);
    sum += (hi - lo) * seg.weights(i, j);
  }
  return sum;
}

ConnectivityCertificate repeated_strong_connectivity(const NetworkSignal& signal, const EventSequence& events,
                                                     double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon: must be > 0");
  const std::size_t intervals = usable_intervals(signal, events);
  if (intervals == 0) throw ValidationError("events: no complete event interval inside the signal horizon");
  const auto t = events.times();
  const std::size_t n = signal.agents();
  ConnectivityCertificate cert;
  cert.epsilon = epsilon;
  cert.verdict = true;
  cert.quasi_verdict = true;
  for (std::size_t p = 0; p < intervals; ++p) {
    DirectedGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && interval_integral(signal, i, j, t[p], t[p + 1]) >= epsilon) g.add_arc(j, i);
      }
    }
    IntervalVerdict v;
    v.p = p;
    v.t_start = t[p];
    v.t_end = t[p + 1];
    v.arcs = g.arcs();
    v.strong = strongly_connected(g);
    const auto q = quasi_strongly_connected(g);
    v.quasi_strong = q.connected;
    v.root = q.root;
    cert.verdict = cert.verdict && v.strong;
    cert.quasi_verdict = cert.quasi_verdict && v.quasi_strong;
    cert.intervals.push_back(std::move(v));
  }
  return cert;
}

bool type_symmetry_check(const NetworkSignal& signal, const EventSequence& events, double K) {
  if (!(K >= 1.0)) throw ValidationError("K: must be >= 1");
  const std::size_t intervals = usable_intervals(signal, events);
  const auto t = events.times();
  const std::size_t n = signal.agents();
  for (std::size_t p = 0; p < intervals; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = interval_integral(signal, i, j, t[p], t[p + 1]);
        const double b = interval_integral(signal, j, i, t[p], t[p + 1]);
        if (!ratio_ok(a, b, K)) return false;
      }
    }
  }
  return true;
}

bool instantaneous_type_symmetry_check(const NetworkSignal& signal, double K) {
  if (!(K >= 1.0)) throw ValidationError("K: must be >= 1");
  const std::size_t n = signal.agents();
  for (const auto& seg : signal.segments()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!ratio_ok(seg.weights(i, j), seg.weights(j, i), K)) return false;
      }
    }
  }
  return true;
}

double m_bound(const NetworkSignal& signal, const EventSequence& events) {
  const std::size_t intervals = usable_intervals(signal, events);
  const auto t = events.times();
  const std::size_t n = signal.agents();
  double m = 0.0;
  for (std::size_t p = 0; p < intervals; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) m = std::max(m, interval_integral(signal, i, j, t[p], t[p + 1]));
      }
    }
  }
  return m;
}

DirectedGraph persistent_graph(const NetworkSignal& signal, double horizon, double divergence_threshold) {
  if (horizon > signal.horizon() + kTimeTolerance) {
    throw RangeError("persistent_graph: horizon exceeds the signal horizon");
  }
  if (!(divergence_threshold > 0.0)) throw ValidationError("persistent_graph: threshold must be > 0");
  const std::size_t n = signal.agents();
  DirectedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && interval_integral(signal, i, j, 0.0, horizon) >= divergence_threshold) g.add_arc(j, i);
    }
  }
  return g;
}

}  // namespace lapdde
