#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lapdde/signal.hpp"

namespace lapdde {

// Arc (j, i) means agent j influences agent i. Indices are 0-based.
class DirectedGraph {
 public:
  explicit DirectedGraph(std::size_t n) : n_(n), out_(n) {}

  std::size_t size() const { return n_; }
  // Self-loops are ignored; duplicate arcs are stored once.
  void add_arc(std::size_t from, std::size_t to);
  bool has_arc(std::size_t from, std::size_t to) const;
  const std::vector<std::size_t>& successors(std::size_t v) const { return out_[v]; }
  std::vector<std::pair<std::size_t, std::size_t>> arcs() const;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> out_;
};

// Graph of the nonzero entries of A: arc (j, i) iff a_ij > threshold.
DirectedGraph graph_of(const SquareMatrix& weights, double threshold = 0.0);

// Component id per node (Tarjan); ids are in reverse topological order of the
// condensation.
std::vector<std::size_t> strong_components(const DirectedGraph& g, std::size_t* count = nullptr);

bool strongly_connected(const DirectedGraph& g);

struct QuasiStrongResult {
  bool connected = false;
  std::optional<std::size_t> root;  // lowest-index node reaching all others
};
QuasiStrongResult quasi_strongly_connected(const DirectedGraph& g);

// Connected when arc directions are ignored.
bool weakly_connected(const DirectedGraph& g);

// Exact integral of a_ij over [t_a, t_b].
double interval_integral(const NetworkSignal& signal, std::size_t i, std::size_t j, double t_a, double t_b);

struct IntervalVerdict {
  std::size_t p = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // (j, i), 0-based
  bool strong = false;
  bool quasi_strong = false;
  std::optional<std::size_t> root;
};

struct ConnectivityCertificate {
  double epsilon = 0.0;
  std::vector<IntervalVerdict> intervals;
  bool verdict = false;        // every interval strongly connected
  bool quasi_verdict = false;  // every interval quasi-strongly connected
};

// Thresholded union graphs E_{p,eps} = {(j,i) : int_{t_p}^{t_{p+1}} a_ij >= eps}
// over the complete intervals of the event sequence inside the horizon.
ConnectivityCertificate repeated_strong_connectivity(const NetworkSignal& signal, const EventSequence& events,
                                                     double epsilon);

// K^-1 int a_ji <= int a_ij <= K int a_ji on every event interval.
bool type_symmetry_check(const NetworkSignal& signal, const EventSequence& events, double K);

// Pointwise K^-1 a_ji <= a_ij <= K a_ji on every segment.
bool instantaneous_type_symmetry_check(const NetworkSignal& signal, double K);

// max over (i, j, p) of int_{t_p}^{t_{p+1}} a_ij.
double m_bound(const NetworkSignal& signal, const EventSequence& events);

// Finite-horizon stand-in for the persistent graph: arc (j, i) iff
// int_0^horizon a_ij >= divergence_threshold.
DirectedGraph persistent_graph(const NetworkSignal& signal, double horizon, double divergence_threshold);

}  // namespace lapdde
