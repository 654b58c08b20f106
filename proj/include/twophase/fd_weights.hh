#pragma once

/*
 * Finite-difference weights on arbitrary nodes (Fornberg's recursion).
 * Exact for polynomials up to degree nodes.size()-1, so a 7-point stencil
 * gives 6th order for the first derivative and the recursion handles
 * one-sided and biased stencils the same way as centered ones.
 */

#include <cstddef>
#include <vector>

#include "twophase/common.hh"

namespace twophase {

/* Weights w so that f^(m)(x0) ~ sum_i w[i] f(nodes[i]). */
inline std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m) {
  const std::size_t n = nodes.size();
  if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n)
    throw error("fd_weights: need more nodes than the derivative order");

  // c[i][k]: weight of node i for derivative order k, built incrementally
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = static_cast<int>(std::min<std::size_t>(i, m));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

/* Uniform-grid convenience: nodes at offsets*h around x0 = 0, derivative m,
 * weights already divided by h^m. */
inline std::vector<double> fd_weights_uniform(const std::vector<int>& offsets, double h, int m) {
  std::vector<double> nodes(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) nodes[i] = offsets[i] * h;
  return fd_weights(0.0, nodes, m);
}

}  // namespace twophase
