#pragma once

/*
 * Whole-space multiplier solves, interface trace formulas, and the
 * flat-interface solvers built from them.
 *
 * Everything is per tangential mode.  With A = sqrt(rho lambda + |xi'|^2)
 * the whole-space part is the kernel solve of prodint applied to the odd
 * extension of -div f plus the even extension of g; at lambda = 0 the
 * tangential zero mode degenerates to the |x-y|/2 kernel.  The normal
 * derivative trace of the even (g) part vanishes identically at the
 * interface, so the trace formulas involve f alone:
 *
 *   dN U_+(0) = f_{+N}(0) - sum_j int_0^inf i xi_j e^{-A+ y} fhat_{+j}(y) dy
 *                        - int_0^inf A+ e^{-A+ y} fhat_{+N}(y) dy,
 *   dN U_-(0) = f_{-N}(0) + sum_j int_0^inf i xi_j e^{-A- y} fhat_{-j}(-y) dy
 *                        - int_0^inf A- e^{-A- y} fhat_{-N}(-y) dy,
 *
 * with the minus side read at distances.  The corrector then repairs both
 * transmission conditions mode-exactly:
 *
 *   what_pm = (+-A_mp g1hat - rho_mp g2hat) / (rho_+ A_- + rho_- A_+)
 *             * e^{-A_pm |x_N|},
 *
 * and at lambda = 0 the same display with A_pm = |xi'|; its tangential
 * zero mode exists only when g2hat(0) vanishes and is gauged to
 * +-g1hat(0)/(rho_+ + rho_-).
 */

#include <algorithm>
#include <cmath>
#include <vector>

#include "twophase/field.hh"
#include "twophase/prodint.hh"
#include "twophase/symbols.hh"

namespace twophase {

struct resolvent_parameter {
  cplx lambda{};
  double sigma = pi / 4;
  double lambda0 = 0.0;

  bool is_zero() const { return lambda == cplx(0.0, 0.0); }
  void require_in_sector() const {
    if (is_zero() || !sector_check(lambda, sigma, lambda0)) throw error("outside sector");
  }
};

/* Restriction of a whole-space solve to its own half-space. */
struct halfspace_solution {
  two_phase_grid grid;
  phase_side side = phase_side::plus;
  std::vector<cplx> values;      // physical samples, t*normal_points + j at distances
  std::vector<cplx> trace_hat;   // per-mode Uhat(0)
  std::vector<cplx> dtrace_hat;  // per-mode dN Uhat(0) from the kernel sweep (diagnostic;
                                 // the solvers use the closed trace formulas instead)
};

namespace detail {

/* Tangential transform of one side of a scalar field. */
inline std::vector<cplx> side_hat(const two_phase_scalar_field& f, phase_side s) {
  std::vector<cplx> v = f.values(s);
  fft::tangential_forward(f.grid, v);
  return v;
}

inline double dn_orientation(phase_side s) { return s == phase_side::plus ? 1.0 : -1.0; }

}  // namespace detail

/* U with rho lambda U - lap U = -div f + g on the declared half-space. */
inline halfspace_solution solve_whole_resolvent(const two_phase_vector_field& f,
                                                const two_phase_scalar_field& g,
                                                const resolvent_parameter& lam, phase_side side,
                                                const density_pair& rho) {
  lam.require_in_sector();
  require_densities(rho);
  const auto& grid = f.grid;
  grid.validate();
  if (g.grid != grid) throw error("solve_whole_resolvent: grid mismatch");
  const double rho_side = rho.of(side == phase_side::plus);

  auto q_hat = detail::side_hat(divergence(f), side);
  for (auto& v : q_hat) v = -v;
  const auto g_hat = detail::side_hat(g, side);

  const int nn = grid.normal_points;
  const double h = grid.normal_spacing();
  halfspace_solution out;
  out.grid = grid;
  out.side = side;
  out.values.assign(grid.side_count(), cplx{});
  out.trace_hat.assign(grid.tangential_count(), cplx{});
  out.dtrace_hat.assign(grid.tangential_count(), cplx{});

  const double orient = detail::dn_orientation(side);
  for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
    const cplx A = symbol_a(rho_side, lam.lambda, grid.frequency_norm(t));
    const auto odd = exp_kernel_solve(q_hat.data() + t * nn, nn, h, A, -1.0);
    const auto even = exp_kernel_solve(g_hat.data() + t * nn, nn, h, A, 1.0);
    for (int j = 0; j < nn; ++j)
      out.values[t * nn + j] = odd.value[j] + even.value[j];
    out.trace_hat[t] = odd.value[0] + even.value[0];
    out.dtrace_hat[t] = orient * (odd.derivative[0] + even.derivative[0]);
  }
  fft::tangential_inverse(grid, out.values);
  return out;
}

/* U with lap U = div f on the declared half-space; the tangential zero mode
 * takes the principal-value kernel (no additive freedom left to choose). */
inline halfspace_solution solve_whole_laplace(const two_phase_vector_field& f, phase_side side) {
  const auto& grid = f.grid;
  grid.validate();
  auto q_hat = detail::side_hat(divergence(f), side);
  for (auto& v : q_hat) v = -v;

  const int nn = grid.normal_points;
  const double h = grid.normal_spacing();
  halfspace_solution out;
  out.grid = grid;
  out.side = side;
  out.values.assign(grid.side_count(), cplx{});
  out.trace_hat.assign(grid.tangential_count(), cplx{});
  out.dtrace_hat.assign(grid.tangential_count(), cplx{});

  const double orient = detail::dn_orientation(side);
  for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
    const double a = grid.frequency_norm(t);
    const auto sol = a == 0.0 ? absolute_kernel_solve(q_hat.data() + t * nn, nn, h, -1.0)
                              : exp_kernel_solve(q_hat.data() + t * nn, nn, h, cplx(a, 0.0), -1.0);
    for (int j = 0; j < nn; ++j) out.values[t * nn + j] = sol.value[j];
    out.trace_hat[t] = sol.value[0];
    out.dtrace_hat[t] = orient * sol.derivative[0];
  }
  fft::tangential_inverse(grid, out.values);
  return out;
}

/* Closed trace formula for dN U at the interface, per tangential mode.
 * lam = 0 selects the harmonic variant; the degenerate (lam = 0, xi' = 0)
 * mode's A-weighted integral is zero by definition, leaving fhat_N(0). */
inline std::vector<cplx> interface_normal_trace(const two_phase_vector_field& f, cplx lam,
                                                phase_side side, const density_pair& rho) {
  require_densities(rho);
  const auto& grid = f.grid;
  grid.validate();
  const double rho_side = rho.of(side == phase_side::plus);
  const int nn = grid.normal_points;
  const double h = grid.normal_spacing();

  std::vector<std::vector<cplx>> comp_hat(grid.dim);
  for (int c = 0; c < grid.dim; ++c) comp_hat[c] = detail::side_hat(f.comp[c], side);

  const double tangential_sign = side == phase_side::plus ? -1.0 : 1.0;
  std::vector<cplx> trace(grid.tangential_count());
  for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
    const cplx A = symbol_a(rho_side, lam, grid.frequency_norm(t));
    const auto xi = grid.frequency_vector(t);
    cplx acc = comp_hat[grid.dim - 1][t * nn];  // fhat_N at the trace plane
    if (A != cplx(0.0, 0.0)) {
      for (int c = 0; c < grid.dim - 1; ++c) {
        if (xi[c] == 0.0) continue;
        const cplx J = exp_weighted_integral(comp_hat[c].data() + t * nn, nn, h, A);
        acc += tangential_sign * cplx(0.0, xi[c]) * J;
      }
      acc -= A * exp_weighted_integral(comp_hat[grid.dim - 1].data() + t * nn, nn, h, A);
    }
    trace[t] = acc;
  }
  return trace;
}

/* ----------------------------- corrector ------------------------------ */

struct corrector_result {
  two_phase_scalar_field w;
  std::vector<cplx> trace_plus_hat, trace_minus_hat;    // what_pm(0)
  std::vector<cplx> dtrace_plus_hat, dtrace_minus_hat;  // analytic dN what_pm(0)
};

namespace detail {

/* Mode-space corrector; g1/g2 already in hat space. */
inline corrector_result corrector_modes(const std::vector<cplx>& g1_hat,
                                        const std::vector<cplx>& g2_hat, cplx lam,
                                        const density_pair& rho, const two_phase_grid& grid,
                                        double zero_mode_tol) {
  const bool zero_lam = lam == cplx(0.0, 0.0);
  const int nn = grid.normal_points;
  const double h = grid.normal_spacing();

  corrector_result out;
  out.w = two_phase_scalar_field(grid);
  out.trace_plus_hat.assign(grid.tangential_count(), cplx{});
  out.trace_minus_hat.assign(grid.tangential_count(), cplx{});
  out.dtrace_plus_hat.assign(grid.tangential_count(), cplx{});
  out.dtrace_minus_hat.assign(grid.tangential_count(), cplx{});

  double g2_scale = 0.0;
  for (const auto& v : g2_hat) g2_scale = std::max(g2_scale, std::abs(v));

  std::vector<cplx> wp(grid.side_count()), wm(grid.side_count());
  for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
    const double n = grid.frequency_norm(t);
    cplx cp, cm, ap, am;
    if (zero_lam && n == 0.0) {
      if (std::abs(g2_hat[t]) > zero_mode_tol * std::max(1.0, g2_scale))
        throw error("incompatible zero mode");
      const cplx base = g1_hat[t] / (rho.plus + rho.minus);
      cp = base;
      cm = -base;
      ap = am = cplx(0.0, 0.0);  // constant-in-x_N mode
    } else {
      ap = symbol_a(rho.plus, lam, n);
      am = symbol_a(rho.minus, lam, n);
      const cplx den = rho.plus * am + rho.minus * ap;
      cp = (am * g1_hat[t] - rho.minus * g2_hat[t]) / den;
      cm = (-ap * g1_hat[t] - rho.plus * g2_hat[t]) / den;
    }
    out.trace_plus_hat[t] = cp;
    out.trace_minus_hat[t] = cm;
    out.dtrace_plus_hat[t] = -ap * cp;
    out.dtrace_minus_hat[t] = am * cm;
    for (int j = 0; j < nn; ++j) {
      const double d = j * h;
      wp[t * nn + j] = cp * std::exp(-ap * d);
      wm[t * nn + j] = cm * std::exp(-am * d);
    }
  }
  fft::tangential_inverse(grid, wp);
  fft::tangential_inverse(grid, wm);
  out.w.plus_values = std::move(wp);
  out.w.minus_values = std::move(wm);
  return out;
}

}  // namespace detail

/* Physical-space entry point: jumps on the tangential grid. */
inline corrector_result flat_corrector(const jump_data& jumps, cplx lam, const density_pair& rho,
                                       const two_phase_grid& grid,
                                       double zero_mode_tol = 1e-8) {
  require_densities(rho);
  grid.validate();
  if (jumps.g1_trace.size() != grid.tangential_count() ||
      jumps.g2_trace.size() != grid.tangential_count())
    throw error("flat_corrector: trace shape mismatch");
  if (lam != cplx(0.0, 0.0) && lam.imag() == 0.0 && lam.real() < 0.0)
    throw error("outside sector");

  // hat space via a one-plane transform
  two_phase_grid plane = grid;
  plane.normal_points = 8;  // minimal legal column count for the transform helper
  std::vector<cplx> g1 = jumps.g1_trace, g2 = jumps.g2_trace;
  std::vector<cplx> buf(plane.side_count());
  const auto to_hat = [&](std::vector<cplx>& tr) {
    for (std::size_t t = 0; t < plane.tangential_count(); ++t) buf[t * 8] = tr[t];
    fft::tangential_forward(plane, buf);
    for (std::size_t t = 0; t < plane.tangential_count(); ++t) tr[t] = buf[t * 8];
  };
  to_hat(g1);
  to_hat(g2);
  return detail::corrector_modes(g1, g2, lam, rho, grid, zero_mode_tol);
}

/* Right-hand-side strength of the transmission system:
 * ||(div f, g, lam^{1/2} f_N, grad f_N, lam^{1/2} h, grad h)||_2. */
inline double resolvent_data_norm(const two_phase_vector_field& f, const two_phase_scalar_field& g,
                                  const two_phase_scalar_field& h, cplx lam) {
  const double mod = std::abs(lam);
  const double divf = l2_norm(divergence(f));
  const double gn = l2_norm(g);
  const double fn = l2_norm(f.comp[f.grid.dim - 1]);
  const double gradfn = l2_norm(gradient(f.comp[f.grid.dim - 1]));
  const double hn = l2_norm(h);
  const double gradh = l2_norm(gradient(h));
  return std::sqrt(divf * divf + gn * gn + mod * fn * fn + gradfn * gradfn + mod * hn * hn +
                   gradh * gradh);
}

/* ----------------------------- solve_flat ------------------------------ */

struct flat_solution {
  two_phase_scalar_field v;
  std::vector<cplx> trace_plus_hat, trace_minus_hat;    // vhat_pm(0)
  std::vector<cplx> dtrace_plus_hat, dtrace_minus_hat;  // dN vhat_pm(0), analytic
  std::vector<cplx> g1_hat, g2_hat;                     // corrector inputs
  double jump_residual_1 = 0.0;  // max |rho_+ v_+ - rho_- v_-| on the trace plane
  double jump_residual_2 = 0.0;  // max |dN(v_+ - v_-) - prescribed jump| on the trace plane
};

/* v_pm = U_pm + w_pm solving the transmission system
 *   rho lambda v - lap v = -div f + g      (or lap v = div f at lambda = 0),
 *   rho_+ v_+ = rho_- v_-                  on the interface,
 *   dN(v_+ - v_-) = [f_N] + [h]            on the interface.                */
inline flat_solution solve_flat(const two_phase_vector_field& f, const two_phase_scalar_field& g,
                                const two_phase_scalar_field& h, const resolvent_parameter& lam,
                                const density_pair& rho, double zero_mode_tol = 1e-8) {
  require_densities(rho);
  const auto& grid = f.grid;
  grid.validate();
  if (g.grid != grid || h.grid != grid) throw error("solve_flat: grid mismatch");

  const bool zero_lam = lam.is_zero();
  if (zero_lam) {
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      for (const auto& v : g.values(s))
        if (v != cplx(0.0, 0.0)) throw error("solve_flat: lambda = 0 requires g = 0");
      for (const auto& v : h.values(s))
        if (v != cplx(0.0, 0.0)) throw error("solve_flat: lambda = 0 requires h = 0");
    }
  } else {
    lam.require_in_sector();
  }

  const auto up = zero_lam ? solve_whole_laplace(f, phase_side::plus)
                           : solve_whole_resolvent(f, g, lam, phase_side::plus, rho);
  const auto um = zero_lam ? solve_whole_laplace(f, phase_side::minus)
                           : solve_whole_resolvent(f, g, lam, phase_side::minus, rho);
  const auto dnp = interface_normal_trace(f, lam.lambda, phase_side::plus, rho);
  const auto dnm = interface_normal_trace(f, lam.lambda, phase_side::minus, rho);

  const std::size_t tc = grid.tangential_count();
  const int nn = grid.normal_points;
  const auto fn_p = detail::side_hat(f.comp[grid.dim - 1], phase_side::plus);
  const auto fn_m = detail::side_hat(f.comp[grid.dim - 1], phase_side::minus);
  const auto h_p = detail::side_hat(h, phase_side::plus);
  const auto h_m = detail::side_hat(h, phase_side::minus);

  flat_solution out;
  out.g1_hat.resize(tc);
  out.g2_hat.resize(tc);
  std::vector<cplx> jump_n(tc);  // prescribed derivative jump per mode
  for (std::size_t t = 0; t < tc; ++t) {
    out.g1_hat[t] = -(rho.plus * up.trace_hat[t] - rho.minus * um.trace_hat[t]);
    jump_n[t] = (fn_p[t * nn] - fn_m[t * nn]) + (h_p[t * nn] - h_m[t * nn]);
    out.g2_hat[t] = -(dnp[t] - dnm[t]) + jump_n[t];
  }

  auto corr = detail::corrector_modes(out.g1_hat, out.g2_hat, lam.lambda, rho, grid,
                                      zero_mode_tol);

  out.v = two_phase_scalar_field(grid);
  for (std::size_t i = 0; i < grid.side_count(); ++i) {
    out.v.plus_values[i] = up.values[i] + corr.w.plus_values[i];
    out.v.minus_values[i] = um.values[i] + corr.w.minus_values[i];
  }
  out.trace_plus_hat.resize(tc);
  out.trace_minus_hat.resize(tc);
  out.dtrace_plus_hat.resize(tc);
  out.dtrace_minus_hat.resize(tc);
  for (std::size_t t = 0; t < tc; ++t) {
    out.trace_plus_hat[t] = up.trace_hat[t] + corr.trace_plus_hat[t];
    out.trace_minus_hat[t] = um.trace_hat[t] + corr.trace_minus_hat[t];
    out.dtrace_plus_hat[t] = dnp[t] + corr.dtrace_plus_hat[t];
    out.dtrace_minus_hat[t] = dnm[t] + corr.dtrace_minus_hat[t];
  }

  if (zero_lam) {
    // gauge: the single-valued u = rho_pm v_pm has zero trace-plane mean
    const cplx mean_u = rho.plus * out.trace_plus_hat[0] / static_cast<double>(tc);
    const cplx dp = mean_u / rho.plus;
    const cplx dm = mean_u / rho.minus;
    for (auto& v : out.v.plus_values) v -= dp;
    for (auto& v : out.v.minus_values) v -= dm;
    out.trace_plus_hat[0] -= dp * static_cast<double>(tc);
    out.trace_minus_hat[0] -= dm * static_cast<double>(tc);
  }

  // jump residuals measured in physical space from the analytic traces
  std::vector<cplx> r1(tc), r2(tc);
  for (std::size_t t = 0; t < tc; ++t) {
    r1[t] = rho.plus * out.trace_plus_hat[t] - rho.minus * out.trace_minus_hat[t];
    r2[t] = (out.dtrace_plus_hat[t] - out.dtrace_minus_hat[t]) - jump_n[t];
  }
  two_phase_grid plane = grid;
  plane.normal_points = 8;
  std::vector<cplx> buf(plane.side_count());
  const auto to_phys_max = [&](const std::vector<cplx>& modes) {
    std::fill(buf.begin(), buf.end(), cplx{});
    for (std::size_t t = 0; t < tc; ++t) buf[t * 8] = modes[t];
    fft::tangential_inverse(plane, buf);
    double m = 0.0;
    for (std::size_t t = 0; t < tc; ++t) m = std::max(m, std::abs(buf[t * 8]));
    return m;
  };
  out.jump_residual_1 = to_phys_max(r1);
  out.jump_residual_2 = to_phys_max(r2);
  return out;
}

}  // namespace twophase
