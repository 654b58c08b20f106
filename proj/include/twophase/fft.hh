#pragma once

/*
 * Thin FFTW wrapper: batched tangential transforms over the strided
 * two-phase layout (normal index fastest) and plain 2D transforms for the
 * torus solvers.  Plans are cached by shape with FFTW_ESTIMATE and created
 * FFTW_UNALIGNED so cached plans apply to any buffer of the same layout.
 * Plan creation is not reentrant; execution is.
 */

#include <fftw3.h>

#include <array>
#include <map>
#include <vector>

#include "twophase/common.hh"
#include "twophase/grid.hh"

namespace twophase::fft {

namespace detail {

struct plan_key {
  int rank;
  int n0, n1;
  int howmany, stride, dist;
  int sign;
  auto operator<=>(const plan_key&) const = default;
};

inline fftw_plan plan_for(const plan_key& k, cplx* data) {
  static std::map<plan_key, fftw_plan> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::array<int, 2> n{k.n0, k.n1};
  fftw_plan p = fftw_plan_many_dft(k.rank, n.data(), k.howmany,
                                   reinterpret_cast<fftw_complex*>(data), nullptr, k.stride, k.dist,
                                   reinterpret_cast<fftw_complex*>(data), nullptr, k.stride, k.dist,
                                   k.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw error("fft: plan creation failed");
  cache.emplace(k, p);
  return p;
}

inline void execute(const plan_key& k, cplx* data) {
  fftw_execute_dft(plan_for(k, data), reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

}  // namespace detail

/* In-place tangential transform of one side's samples (layout: flat
 * tangential index slow, normal index fast). */
inline void tangential(const two_phase_grid& g, std::vector<cplx>& side_values, int sign) {
  if (side_values.size() != g.side_count()) throw error("fft: sample count mismatch");
  const int nn = g.normal_points;
  detail::plan_key k{g.tangential_dims(), g.tangential_size, g.tangential_size, nn, nn, 1, sign};
  detail::execute(k, side_values.data());
  if (sign == FFTW_BACKWARD) {
    const double scale = 1.0 / static_cast<double>(g.tangential_count());
    for (auto& v : side_values) v *= scale;
  }
}

inline void tangential_forward(const two_phase_grid& g, std::vector<cplx>& v) {
  tangential(g, v, FFTW_FORWARD);
}
inline void tangential_inverse(const two_phase_grid& g, std::vector<cplx>& v) {
  tangential(g, v, FFTW_BACKWARD);
}

/* Plain in-place 2D transform of an n-by-n row-major array. */
inline void plane(int n, std::vector<cplx>& values, int sign) {
  if (values.size() != static_cast<std::size_t>(n) * n) throw error("fft: sample count mismatch");
  detail::plan_key k{2, n, n, 1, 1, 1, sign};
  detail::execute(k, values.data());
  if (sign == FFTW_BACKWARD) {
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& v : values) v *= scale;
  }
}

inline void plane_forward(int n, std::vector<cplx>& v) { plane(n, v, FFTW_FORWARD); }
inline void plane_inverse(int n, std::vector<cplx>& v) { plane(n, v, FFTW_BACKWARD); }

}  // namespace twophase::fft
