#pragma once

/*
 * Two-phase weak elliptic solve and the Helmholtz-Weyl split built on it.
 *
 * The weak problem (rho^{-1} grad u, grad phi) = (f, grad phi) is solved
 * strongly: v from the lambda = 0 flat transmission solve with data (f, f),
 * then u = rho_pm v_pm, which is single-valued across the interface because
 * the solver enforces rho_+ v_+ = rho_- v_-.  The split is q = rho^{-1}
 * grad u and p = f - q.
 *
 * Weak identities are checked against gradients of tangential Fourier
 * modes times normal hat functions.  Pairings integrate the quintic nodal
 * interpolant exactly on each element; linear-interpolant quadrature would
 * cap the check at second order, far above the 1e-8 budget the identities
 * are held to.
 */

#include <cmath>
#include <cstddef>
#include <vector>

#include "twophase/halfspace.hh"

namespace twophase {

struct weak_solution {
  two_phase_scalar_field u;  // single-valued across the interface, trace mean gauged to zero
  two_phase_scalar_field v;  // underlying transmission solution, u = rho v
  double jump_residual_1 = 0.0;
  double jump_residual_2 = 0.0;
};

inline weak_solution solve_weak(const two_phase_vector_field& f, const density_pair& rho) {
  require_densities(rho);
  const two_phase_scalar_field zero(f.grid);
  auto sol = solve_flat(f, zero, zero, {cplx(0.0, 0.0)}, rho);
  weak_solution out;
  out.v = std::move(sol.v);
  out.u = out.v;
  scale_side(out.u, phase_side::plus, rho.plus);
  scale_side(out.u, phase_side::minus, rho.minus);
  out.jump_residual_1 = sol.jump_residual_1;
  out.jump_residual_2 = sol.jump_residual_2;
  return out;
}

struct helmholtz_split {
  two_phase_vector_field p_part;     // solenoidal part
  two_phase_vector_field q_part;     // rho^{-1} grad u
  two_phase_scalar_field potential;  // u from the weak solve
};

inline helmholtz_split decompose(const two_phase_vector_field& f, const density_pair& rho) {
  auto weak = solve_weak(f, rho);
  helmholtz_split out;
  out.q_part = gradient(weak.u);
  for (int c = 0; c < f.grid.dim; ++c) {
    scale_side(out.q_part.comp[c], phase_side::plus, 1.0 / rho.plus);
    scale_side(out.q_part.comp[c], phase_side::minus, 1.0 / rho.minus);
  }
  out.p_part = f;
  for (int c = 0; c < f.grid.dim; ++c)
    axpy(out.p_part.comp[c], cplx(-1.0, 0.0), out.q_part.comp[c]);
  out.potential = std::move(weak.u);
  return out;
}

/* ----------------------- weak-identity pairings ----------------------- */

struct gradient_basis_report {
  double worst_abs = 0.0;       // max |(w, grad phi)| over the basis
  double worst_relative = 0.0;  // max |(w, grad phi)| / (scale ||grad phi||)
  std::size_t modes = 0;        // tangential modes visited (Nyquist rows skipped)
  std::size_t hats = 0;         // hat functions per mode
};

namespace detail {

/* Element integrals of the quintic interpolant of one hat-space column:
 * plain, rising-weight (t/h), and falling-weight (1 - t/h). */
struct element_integrals {
  std::vector<cplx> plain, rise, fall;
};

inline element_integrals integrate_elements(const cplx* col, int n, double h) {
  const auto coeffs = prodint_detail::interpolate(col, n);
  element_integrals out;
  out.plain.resize(n - 1);
  out.rise.resize(n - 1);
  out.fall.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    cplx p{}, r{};
    for (int m = 0; m < 6; ++m) {
      p += coeffs[i].c[m] / static_cast<double>(m + 1);
      r += coeffs[i].c[m] / static_cast<double>(m + 2);
    }
    out.plain[i] = h * p;
    out.rise[i] = h * r;
    out.fall[i] = h * (p - r);
  }
  return out;
}

}  // namespace detail

/* Max pairing of w against every basis test gradient.  scale is the data
 * norm used for the relative figure (pass ||f|| when checking the
 * solenoidal defect of a decomposition of f). */
inline gradient_basis_report weak_gradient_pairings(const two_phase_vector_field& w,
                                                    double scale) {
  const auto& grid = w.grid;
  grid.validate();
  const int nn = grid.normal_points;
  const double h = grid.normal_spacing();
  const int line_nodes = 2 * nn - 1;
  const int line_elems = line_nodes - 1;
  double tangential_volume = 1.0;
  for (int c = 0; c < grid.dim - 1; ++c) tangential_volume *= grid.tangential_period;
  const double mode_weight = tangential_volume / static_cast<double>(grid.tangential_count());

  std::vector<std::vector<cplx>> hat_plus(grid.dim), hat_minus(grid.dim);
  for (int c = 0; c < grid.dim; ++c) {
    hat_plus[c] = detail::side_hat(w.comp[c], phase_side::plus);
    hat_minus[c] = detail::side_hat(w.comp[c], phase_side::minus);
  }

  gradient_basis_report report;
  report.hats = static_cast<std::size_t>(line_nodes - 2);

  // line-ordered element integrals, minus side reversed in front of plus
  std::vector<detail::element_integrals> tang_line(grid.dim - 1);
  detail::element_integrals norm_line;
  for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
    const auto idx = grid.tangential_multi_index(t);
    bool nyquist = false;
    for (int c = 0; c < grid.dim - 1; ++c)
      if (2 * std::abs(grid.wave_index(idx[c])) == grid.tangential_size) nyquist = true;
    if (nyquist) continue;
    ++report.modes;
    const auto xi = grid.frequency_vector(t);

    const auto splice = [&](const std::vector<cplx>& minus_hat,
                            const std::vector<cplx>& plus_hat) {
      const auto m = detail::integrate_elements(minus_hat.data() + t * nn, nn, h);
      const auto p = detail::integrate_elements(plus_hat.data() + t * nn, nn, h);
      detail::element_integrals line;
      line.plain.resize(line_elems);
      line.rise.resize(line_elems);
      line.fall.resize(line_elems);
      for (int e = 0; e < nn - 1; ++e) {
        const int im = nn - 2 - e;  // distance interval of line element e
        line.plain[e] = m.plain[im];
        line.rise[e] = m.fall[im];  // x ascends while distance descends
        line.fall[e] = m.rise[im];
        line.plain[nn - 1 + e] = p.plain[e];
        line.rise[nn - 1 + e] = p.rise[e];
        line.fall[nn - 1 + e] = p.fall[e];
      }
      return line;
    };
    for (int c = 0; c < grid.dim - 1; ++c) tang_line[c] = splice(hat_minus[c], hat_plus[c]);
    norm_line = splice(hat_minus[grid.dim - 1], hat_plus[grid.dim - 1]);

    double xi2 = 0.0;
    for (int c = 0; c < grid.dim - 1; ++c) xi2 += xi[c] * xi[c];
    // interior hats only: test gradients vanish at the truncation boundary,
    // mirroring the decay of the continuum test space
    for (int p = 1; p < line_nodes - 1; ++p) {
      cplx pairing{};
      for (int c = 0; c < grid.dim - 1; ++c)
        pairing += cplx(0.0, -xi[c]) * (tang_line[c].rise[p - 1] + tang_line[c].fall[p]);
      pairing += (norm_line.plain[p - 1] - norm_line.plain[p]) / h;
      pairing *= mode_weight;

      const double grad_norm =
          std::sqrt(tangential_volume * 2.0 * (xi2 * h / 3.0 + 1.0 / h));
      const double abs_pair = std::abs(pairing);
      report.worst_abs = std::max(report.worst_abs, abs_pair);
      if (scale > 0.0)
        report.worst_relative =
            std::max(report.worst_relative, abs_pair / (scale * grad_norm));
    }
  }
  return report;
}

}  // namespace twophase
