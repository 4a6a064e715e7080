#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lapdde/graph.hpp"
#include "lapdde/signal.hpp"

namespace lapdde::oracle {

inline NetworkSignal constant_signal(const std::vector<std::vector<double>>& a, double horizon, double h = 0.0,
                                     double a_bar = 0.0) {
  SquareMatrix w = SquareMatrix::from_rows(a);
  const std::size_t n = w.size();
  SquareMatrix d(n);
  double amax = a_bar;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) d(i, j) = h;
      amax = std::max(amax, w(i, j));
    }
  }
  return NetworkSignal(n, amax > 0.0 ? amax : 1.0, h, {{0.0, horizon, w, d}});
}

// Laplacian L = diag(row sums) - A.
inline Eigen::MatrixXd laplacian(const SquareMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      l(i, j) = -a(i, j);
      l(i, i) += a(i, j);
    }
  }
  return l;
}

// x(t) = exp(-L t) x0.
inline Eigen::VectorXd expm_solution(const SquareMatrix& a, const std::vector<double>& x0, double t) {
  const Eigen::MatrixXd e = (-laplacian(a) * t).exp();
  return e * Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
}

// reach[u][v]: v reachable from u by a walk (reflexive).
inline std::vector<std::vector<bool>> closure(const DirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    r[u][u] = true;
    for (std::size_t v : g.successors(u)) r[u][v] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (r[u][k] && r[k][v]) r[u][v] = true;
  return r;
}

inline DirectedGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  DirectedGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && coin(rng)) g.add_arc(u, v);
  return g;
}

inline double riemann(const NetworkSignal& s, std::size_t i, std::size_t j, double ta, double tb, double dt) {
  const auto steps = static_cast<std::size_t>(std::llround((tb - ta) / dt));
  double sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) sum += s.weight(i, j, ta + (static_cast<double>(k) + 0.5) * dt) * dt;
  return sum;
}

}  // namespace lapdde::oracle
