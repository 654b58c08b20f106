#pragma once

/*
 * Tangentially periodic, normally truncated two-phase grid.
 *
 * Tangential dimensions (N-1 of them) are periodized to a torus so the
 * partial Fourier transform becomes exact at discrete wavenumbers.  The
 * normal direction is truncated to [-L, L] with the interface plane x_N = 0
 * stored twice, once per phase, so one-sided traces and jumps are
 * first-class.  Each side keeps samples at distances j*h from the
 * interface, j = 0 .. normal_points-1, h = L/(normal_points-1); the minus
 * side's sample j therefore lives at x_N = -j*h.
 */

#include <cmath>
#include <cstddef>
#include <vector>

#include "twophase/common.hh"

namespace twophase {

enum class phase_side { plus, minus };

struct two_phase_grid {
  int dim = 2;                      // ambient dimension N, 2 or 3
  int tangential_size = 64;         // points per tangential dimension, power of two
  double tangential_period = 2 * pi;
  double normal_half_extent = 10.0; // L
  int normal_points = 257;          // samples per side, trace plane included

  int tangential_dims() const { return dim - 1; }

  std::size_t tangential_count() const {
    std::size_t c = 1;
    for (int d = 0; d < tangential_dims(); ++d) c *= tangential_size;
    return c;
  }
  std::size_t side_count() const { return tangential_count() * normal_points; }

  double tangential_spacing() const { return tangential_period / tangential_size; }
  double normal_spacing() const { return normal_half_extent / (normal_points - 1); }

  double tangential_coord(int i) const { return i * tangential_spacing(); }
  double normal_distance(int j) const { return j * normal_spacing(); }
  double normal_coord(phase_side s, int j) const {
    return s == phase_side::plus ? normal_distance(j) : -normal_distance(j);
  }

  /* Signed integer wavenumber of tangential index i (in [-size/2, size/2)). */
  int wave_index(int i) const { return i < tangential_size / 2 ? i : i - tangential_size; }
  /* Physical frequency 2*pi*k/period. */
  double frequency(int i) const { return 2 * pi * wave_index(i) / tangential_period; }

  /* Decompose a flat tangential index (row-major, first dimension slowest). */
  std::vector<int> tangential_multi_index(std::size_t t) const {
    std::vector<int> idx(tangential_dims());
    for (int d = tangential_dims() - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(t % tangential_size);
      t /= tangential_size;
    }
    return idx;
  }

  /* Tangential frequency vector of a flat index. */
  std::vector<double> frequency_vector(std::size_t t) const {
    auto idx = tangential_multi_index(t);
    std::vector<double> xi(idx.size());
    for (std::size_t d = 0; d < idx.size(); ++d) xi[d] = frequency(idx[d]);
    return xi;
  }

  double frequency_norm(std::size_t t) const {
    double n2 = 0.0;
    for (double x : frequency_vector(t)) n2 += x * x;
    return std::sqrt(n2);
  }

  void validate() const {
    if (dim != 2 && dim != 3) throw error("two_phase_grid: dim must be 2 or 3");
    if (tangential_size < 2 || (tangential_size & (tangential_size - 1)) != 0)
      throw error("two_phase_grid: tangential size must be a power of two");
    if (!(tangential_period > 0.0)) throw error("two_phase_grid: period must be positive");
    if (!(normal_half_extent > 0.0)) throw error("two_phase_grid: L must be positive");
    if (normal_points < 8) throw error("two_phase_grid: need at least 8 normal samples");
  }

  bool operator==(const two_phase_grid&) const = default;
};

}  // namespace twophase
