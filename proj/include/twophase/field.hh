#pragma once

/*
 * Two-phase fields and their calculus.
 *
 * Tangential derivatives are exact discrete Fourier differentiation (the
 * Nyquist mode, which has no well-defined first derivative, is
 * annihilated).  Normal derivatives are finite differences per side, never
 * reaching across the interface: 7-point centered stencils inside, 8-point
 * biased stencils on the three rows nearest each end.  The boundary rows
 * are one order better than the interior on purpose; equal-order one-sided
 * closures leave an O(h^5) error ridge when derivatives are composed.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "twophase/fd_weights.hh"
#include "twophase/fft.hh"
#include "twophase/grid.hh"

namespace twophase {

enum class extension_parity { odd, even };

struct two_phase_scalar_field {
  two_phase_grid grid;
  std::vector<cplx> plus_values;   // index t*normal_points + j, sample at x_N = +j*h
  std::vector<cplx> minus_values;  // same layout, sample at x_N = -j*h

  two_phase_scalar_field() = default;
  explicit two_phase_scalar_field(const two_phase_grid& g)
      : grid(g), plus_values(g.side_count()), minus_values(g.side_count()) {
    g.validate();
  }

  std::vector<cplx>& values(phase_side s) {
    return s == phase_side::plus ? plus_values : minus_values;
  }
  const std::vector<cplx>& values(phase_side s) const {
    return s == phase_side::plus ? plus_values : minus_values;
  }
  cplx& at(phase_side s, std::size_t t, int j) {
    return values(s)[t * grid.normal_points + j];
  }
  cplx at(phase_side s, std::size_t t, int j) const {
    return values(s)[t * grid.normal_points + j];
  }
};

struct two_phase_vector_field {
  two_phase_grid grid;
  std::vector<two_phase_scalar_field> comp;  // N components

  two_phase_vector_field() = default;
  explicit two_phase_vector_field(const two_phase_grid& g) : grid(g) {
    comp.assign(g.dim, two_phase_scalar_field(g));
  }
  two_phase_scalar_field& normal() { return comp.back(); }
  const two_phase_scalar_field& normal() const { return comp.back(); }
};

struct jump_data {
  std::vector<cplx> g1_trace;  // jump of rho v across the interface
  std::vector<cplx> g2_trace;  // jump of the conormal data
};

/* ------------------------------- traces ------------------------------- */

inline std::vector<cplx> interface_trace(const two_phase_scalar_field& f, phase_side s) {
  const std::size_t tc = f.grid.tangential_count();
  std::vector<cplx> tr(tc);
  for (std::size_t t = 0; t < tc; ++t) tr[t] = f.at(s, t, 0);
  return tr;
}

/* Pointwise plus-trace minus minus-trace on the interface grid. */
inline std::vector<cplx> jump(const two_phase_scalar_field& f) {
  auto tr = interface_trace(f, phase_side::plus);
  const auto tm = interface_trace(f, phase_side::minus);
  for (std::size_t t = 0; t < tr.size(); ++t) tr[t] -= tm[t];
  return tr;
}

/* Jump of rho v, the quantity the transmission condition constrains. */
inline std::vector<cplx> jump_weighted(const two_phase_scalar_field& f, const density_pair& rho) {
  auto tr = interface_trace(f, phase_side::plus);
  const auto tm = interface_trace(f, phase_side::minus);
  for (std::size_t t = 0; t < tr.size(); ++t) tr[t] = rho.plus * tr[t] - rho.minus * tm[t];
  return tr;
}

/* ----------------------------- extensions ----------------------------- */

/* One side's samples reflected to the whole line [-L, L]; index j = 0 ..
 * 2*normal_points-2 maps to x_N = -L + j*h.  Used by tests and by the
 * whole-space solves' data preparation. */
struct extended_line_field {
  two_phase_grid grid;
  std::vector<cplx> values;  // t*(2*normal_points-1) + j

  int line_points() const { return 2 * grid.normal_points - 1; }
  double line_coord(int j) const { return -grid.normal_half_extent + j * grid.normal_spacing(); }
};

inline extended_line_field extend(const two_phase_scalar_field& f, extension_parity parity,
                                  phase_side source) {
  const int nn = f.grid.normal_points;
  const int ln = 2 * nn - 1;
  extended_line_field ext;
  ext.grid = f.grid;
  ext.values.assign(f.grid.tangential_count() * ln, cplx{});
  const double sign = parity == extension_parity::odd ? -1.0 : 1.0;
  for (std::size_t t = 0; t < f.grid.tangential_count(); ++t) {
    for (int j = 0; j < ln; ++j) {
      const int off = j - (nn - 1);  // signed steps from the interface
      const int dist = std::abs(off);
      const bool own = source == phase_side::plus ? off >= 0 : off <= 0;
      const cplx v = f.at(source, t, dist);
      ext.values[t * ln + j] = own ? v : sign * v;
    }
  }
  return ext;
}

/* --------------------------- differentiation --------------------------- */

namespace detail {

/* Normal-derivative stencil table for one half-grid: rows of (first node,
 * weights), derivative taken with respect to the distance variable. */
struct normal_stencils {
  int width = 0;
  std::vector<int> first;
  std::vector<std::vector<double>> weights;  // per row
};

inline normal_stencils build_normal_stencils(int n, double h, int order) {
  normal_stencils s;
  const int cw = 7;            // centered width
  const int bw = 8 + (order - 1);  // biased width, one order above the interior
  s.width = bw;
  s.first.resize(n);
  s.weights.resize(n);
  std::vector<int> off;
  for (int j = 0; j < n; ++j) {
    if (j < 3) {
      s.first[j] = 0;
    } else if (j > n - 4) {
      s.first[j] = n - bw;
    } else {
      s.first[j] = j - cw / 2;
    }
    const int w = (j < 3 || j > n - 4) ? bw : cw;
    off.resize(w);
    for (int k = 0; k < w; ++k) off[k] = s.first[j] + k - j;
    s.weights[j] = fd_weights_uniform(off, h, order);
  }
  return s;
}

inline void apply_normal_stencils(const normal_stencils& s, const cplx* in, cplx* out, int n) {
  for (int j = 0; j < n; ++j) {
    cplx acc{};
    const auto& w = s.weights[j];
    const cplx* base = in + s.first[j];
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * base[k];
    out[j] = acc;
  }
}

}  // namespace detail

/* d/dx_direction; tangential directions are spectral, the normal direction
 * is finite differences in the distance variable with the minus side's
 * orientation flip. */
inline two_phase_scalar_field differentiate(const two_phase_scalar_field& f, int direction) {
  const auto& g = f.grid;
  if (direction < 0 || direction >= g.dim) throw error("differentiate: direction out of range");
  two_phase_scalar_field out(g);

  if (direction < g.tangential_dims()) {
    const int nn = g.normal_points;
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      std::vector<cplx> work = f.values(s);
      fft::tangential_forward(g, work);
      for (std::size_t t = 0; t < g.tangential_count(); ++t) {
        const auto idx = g.tangential_multi_index(t);
        const int k = g.wave_index(idx[direction]);
        cplx mult(0.0, 2 * pi * k / g.tangential_period);
        if (2 * std::abs(k) == g.tangential_size) mult = 0.0;  // Nyquist annihilated
        for (int j = 0; j < nn; ++j) work[t * nn + j] *= mult;
      }
      fft::tangential_inverse(g, work);
      out.values(s) = std::move(work);
    }
    return out;
  }

  const int nn = g.normal_points;
  const auto stencils = detail::build_normal_stencils(nn, g.normal_spacing(), 1);
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const double orient = s == phase_side::plus ? 1.0 : -1.0;
    const auto& in = f.values(s);
    auto& o = out.values(s);
    for (std::size_t t = 0; t < g.tangential_count(); ++t) {
      detail::apply_normal_stencils(stencils, in.data() + t * nn, o.data() + t * nn, nn);
      if (orient < 0)
        for (int j = 0; j < nn; ++j) o[t * nn + j] = -o[t * nn + j];
    }
  }
  return out;
}

inline two_phase_vector_field gradient(const two_phase_scalar_field& f) {
  two_phase_vector_field out(f.grid);
  for (int d = 0; d < f.grid.dim; ++d) out.comp[d] = differentiate(f, d);
  return out;
}

inline two_phase_scalar_field divergence(const two_phase_vector_field& v) {
  if (static_cast<int>(v.comp.size()) != v.grid.dim)
    throw error("divergence: component count must equal dim");
  two_phase_scalar_field out(v.grid);
  for (int d = 0; d < v.grid.dim; ++d) {
    const auto dd = differentiate(v.comp[d], d);
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      auto& acc = out.values(s);
      const auto& add = dd.values(s);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += add[i];
    }
  }
  return out;
}

/* ------------------------------- norms -------------------------------- */

struct field_norms {
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double resolvent_triplet = 0.0;  // sqrt(|lam v|^2 + |lam^{1/2} grad v|^2 + |grad^2 v|^2)
};

namespace detail {

/* Trapezoid in the normal distance, uniform tangential weights, both sides. */
inline double l2_sq(const two_phase_scalar_field& f) {
  const auto& g = f.grid;
  const int nn = g.normal_points;
  const double h = g.normal_spacing();
  double tw = 1.0;
  for (int d = 0; d < g.tangential_dims(); ++d) tw *= g.tangential_spacing();
  double acc = 0.0;
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const auto& v = f.values(s);
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < nn; ++j) {
        const double w = (j == 0 || j == nn - 1) ? 0.5 : 1.0;
        acc += w * std::norm(v[t * nn + j]);
      }
  }
  return acc * h * tw;
}

}  // namespace detail

inline double l2_norm(const two_phase_scalar_field& f) { return std::sqrt(detail::l2_sq(f)); }

inline double l2_norm(const two_phase_vector_field& v) {
  double acc = 0.0;
  for (const auto& c : v.comp) acc += detail::l2_sq(c);
  return std::sqrt(acc);
}

inline field_norms norms(const two_phase_scalar_field& f, std::optional<cplx> lam = {}) {
  field_norms n;
  const double l2s = detail::l2_sq(f);
  double grad_s = 0.0, hess_s = 0.0;
  std::vector<two_phase_scalar_field> grads;
  grads.reserve(f.grid.dim);
  for (int d = 0; d < f.grid.dim; ++d) grads.push_back(differentiate(f, d));
  for (const auto& gd : grads) grad_s += detail::l2_sq(gd);
  for (int d = 0; d < f.grid.dim; ++d)
    for (int e = 0; e < f.grid.dim; ++e) hess_s += detail::l2_sq(differentiate(grads[d], e));
  n.l2 = std::sqrt(l2s);
  n.h1 = std::sqrt(l2s + grad_s);
  n.h2 = std::sqrt(l2s + grad_s + hess_s);
  if (lam) {
    const double al = std::abs(*lam);
    n.resolvent_triplet = std::sqrt(al * al * l2s + al * grad_s + hess_s);
  }
  return n;
}

/* --------------------------- linear algebra --------------------------- */

inline void axpy(two_phase_scalar_field& y, cplx a, const two_phase_scalar_field& x) {
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    auto& yv = y.values(s);
    const auto& xv = x.values(s);
    if (yv.size() != xv.size()) throw error("axpy: shape mismatch");
    for (std::size_t i = 0; i < yv.size(); ++i) yv[i] += a * xv[i];
  }
}

inline void scale(two_phase_scalar_field& f, cplx a) {
  for (phase_side s : {phase_side::plus, phase_side::minus})
    for (auto& v : f.values(s)) v *= a;
}

inline void scale_side(two_phase_scalar_field& f, phase_side s, cplx a) {
  for (auto& v : f.values(s)) v *= a;
}

}  // namespace twophase
