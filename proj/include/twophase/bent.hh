#pragma once

/* Bent-interface transmission solver.
 *
 * The interface is the image of the flat plane under a global diffeomorphism
 * Phi(x) = A x + delta psi(x) with A a rotation and psi a bend profile whose
 * gradient stays below 1/2.  Pulling the system back to flat coordinates
 * turns the curved problem into the flat one plus perturbation terms of size
 * O(m1), so the solve is a fixed-point iteration around solve_flat.
 *
 * Orientation: the flat solver prescribes the jump of d_N v, the derivative
 * along +e_N.  The bent conormal here is taken along the unit normal that
 * points from the minus phase into the plus phase (the mapped +e_N).  With
 * that choice the pulled-back jump condition is literally the flat one with
 * transformed data, and a trivial map reduces the solver to solve_flat on
 * identical inputs.
 *
 * Bent-coordinate grid functions are represented by samples on the rotated
 * raster y = A x_node, the natural chart for the tilted strip; with the
 * identity rotation this is the plain raster.  Values at raster nodes that
 * fall across the bent interface are samples of the smooth extension, which
 * is also what the resampling produces.
 *
 * Restricted to dim == 2: one tangential dimension, Eigen 2-vector geometry.
 */

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "twophase/common.hh"
#include "twophase/fft.hh"
#include "twophase/field.hh"
#include "twophase/grid.hh"
#include "twophase/halfspace.hh"
#include "twophase/prodint.hh"

namespace twophase {

/* Bend displacement psi and its Jacobian; tangentially 2pi-periodic. */
struct bend_profile {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> displacement;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> displacement_grad;
};

/* Vertical shear along a height function p: psi = (0, p(x_1)). */
inline bend_profile shear_profile(std::function<double(double)> height,
                                  std::function<double(double)> slope) {
  bend_profile out;
  out.displacement = [height = std::move(height)](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(0.0, height(x[0]));
  };
  out.displacement_grad = [slope = std::move(slope)](const Eigen::Vector2d& x) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(1, 0) = slope(x[0]);
    return g;
  };
  return out;
}

inline bend_profile sinusoidal_shear() {
  return shear_profile([](double s) { return std::sin(s); },
                       [](double s) { return std::cos(s); });
}

inline bend_profile identity_profile() {
  bend_profile out;
  out.displacement = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); };
  out.displacement_grad = [](const Eigen::Vector2d&) { return Eigen::Matrix2d::Zero(); };
  return out;
}

struct diffeomorphism {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  double amplitude = 0.0;
  bend_profile profile;
  double m1 = 0.0;  // sup over the build grid of |B| and |B_{-1}| entries
  double m2 = 0.0;  // recorded difference-quotient bound for grad B, not enforced
  double c3 = 1.0;  // recorded lower bound of J and d over the build grid
  double c4 = 1.0;  // recorded upper bound

  Eigen::Vector2d forward(const Eigen::Vector2d& x) const {
    return rotation * x + amplitude * profile.displacement(x);
  }
  /* B(x): deviation of grad Phi from the rotation. */
  Eigen::Matrix2d bend(const Eigen::Vector2d& x) const {
    return amplitude * profile.displacement_grad(x);
  }
  Eigen::Matrix2d forward_grad(const Eigen::Vector2d& x) const {
    return rotation + bend(x);
  }
  /* B_{-1}(x): deviation of (grad Phi^{-1})(Phi(x)) from the rotation inverse. */
  Eigen::Matrix2d inverse_bend(const Eigen::Vector2d& x) const {
    return forward_grad(x).inverse() - rotation.transpose();
  }
  double jacobian(const Eigen::Vector2d& x) const {
    return forward_grad(x).determinant();
  }
  /* d(x) = |(A^{-1} + B_{-1})^T e_N|: length of the mapped vertical conormal. */
  double normal_factor(const Eigen::Vector2d& x) const {
    const Eigen::Matrix2d m = rotation.transpose() + inverse_bend(x);
    return (m.transpose() * Eigen::Vector2d(0.0, 1.0)).norm();
  }

  /* Phi^{-1}(y) by Newton, seeded with the rotation inverse. */
  Eigen::Vector2d inverse(const Eigen::Vector2d& y, double tol = 1e-12) const {
    Eigen::Vector2d x = rotation.transpose() * y;
    for (int it = 0; it < 50; ++it) {
      const Eigen::Vector2d r = forward(x) - y;
      if (r.norm() <= tol) return x;
      x -= forward_grad(x).inverse() * r;
    }
    throw error("diffeomorphism: inverse not converged");
  }
};

namespace bent_detail {

inline Eigen::Vector2d node_point(const two_phase_grid& g, phase_side s, std::size_t t, int j) {
  return Eigen::Vector2d(g.tangential_coord(static_cast<int>(t)), g.normal_coord(s, j));
}

}  // namespace bent_detail

/* Validate a map on a grid and record its bounds.  Throws "M1 exceeded" when
 * the bend slope leaves the admissible range. */
inline diffeomorphism build_map(const bend_profile& profile, double amplitude,
                                const Eigen::Matrix2d& rotation, const two_phase_grid& grid) {
  grid.validate();
  if (grid.dim != 2) throw error("build_map: only dim 2 is supported");
  const Eigen::Matrix2d orth = rotation * rotation.transpose() - Eigen::Matrix2d::Identity();
  if (orth.cwiseAbs().maxCoeff() > 1e-12 || rotation.determinant() < 0.0)
    throw error("build_map: rotation must be orthonormal with determinant one");

  diffeomorphism phi;
  phi.rotation = rotation;
  phi.amplitude = amplitude;
  phi.profile = profile;

  double sup_b = 0.0, sup_binv = 0.0, sup_db = 0.0;
  double lower = std::numeric_limits<double>::infinity(), upper = 0.0;
  double comp_defect = 0.0;
  const double ht = grid.tangential_spacing(), hn = grid.normal_spacing();
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
      for (int j = 0; j < grid.normal_points; ++j) {
        const Eigen::Vector2d x = bent_detail::node_point(grid, s, t, j);
        const Eigen::Matrix2d b = phi.bend(x);
        sup_b = std::max(sup_b, b.cwiseAbs().maxCoeff());
        const Eigen::Matrix2d db1 = (phi.bend(x + Eigen::Vector2d(ht, 0.0)) - b) / ht;
        const Eigen::Matrix2d db2 = (phi.bend(x + Eigen::Vector2d(0.0, hn)) - b) / hn;
        sup_db = std::max({sup_db, db1.cwiseAbs().maxCoeff(), db2.cwiseAbs().maxCoeff()});
      }
    }
  }
  if (sup_b > 0.5) throw error("build_map: M1 exceeded");

  /* B_{-1} needs the inverse, well defined once B is admissible. */
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
      for (int j = 0; j < grid.normal_points; ++j) {
        const Eigen::Vector2d x = bent_detail::node_point(grid, s, t, j);
        const Eigen::Matrix2d binv = phi.inverse_bend(x);
        sup_binv = std::max(sup_binv, binv.cwiseAbs().maxCoeff());
        const double jac = phi.jacobian(x), d = phi.normal_factor(x);
        if (!(jac > 0.0) || !(d > 0.0)) throw error("build_map: jacobian degenerate");
        lower = std::min({lower, jac, d});
        upper = std::max({upper, jac, d});
        const Eigen::Matrix2d comp =
            phi.forward_grad(x) * (rotation.transpose() + binv) - Eigen::Matrix2d::Identity();
        comp_defect = std::max(comp_defect, comp.cwiseAbs().maxCoeff());
      }
    }
  }
  if (sup_binv > 0.5) throw error("build_map: M1 exceeded");
  if (comp_defect > 1e-8) throw error("build_map: composition check failed");

  /* Newton round trip on a coarse node subset. */
  const std::size_t stride = std::max<std::size_t>(1, grid.tangential_count() / 8);
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    for (std::size_t t = 0; t < grid.tangential_count(); t += stride) {
      for (int j : {0, grid.normal_points / 2, grid.normal_points - 1}) {
        const Eigen::Vector2d x = bent_detail::node_point(grid, s, t, j);
        if ((phi.inverse(phi.forward(x)) - x).norm() > 1e-8)
          throw error("build_map: inverse round trip failed");
      }
    }
  }

  phi.m1 = std::max(sup_b, sup_binv);
  phi.m2 = sup_db;
  phi.c3 = lower;
  phi.c4 = upper;
  return phi;
}

/* Per-node geometry samples used by the transformed system. */
struct bent_geometry {
  two_phase_grid grid;
  two_phase_scalar_field jac;                     // J
  two_phase_scalar_field dfac;                    // d
  std::array<two_phase_scalar_field, 4> pullmat;  // A^{-1}+B_{-1}, row-major
  std::array<two_phase_scalar_field, 4> cmat;     // C_{-1} = M M^T - I, row-major
  double max_one_minus_jac = 0.0;
  double max_cmat = 0.0;

  bool perturbation_vanishes() const { return max_one_minus_jac == 0.0 && max_cmat == 0.0; }
};

inline bent_geometry sample_geometry(const diffeomorphism& phi, const two_phase_grid& grid) {
  grid.validate();
  if (grid.dim != 2) throw error("sample_geometry: only dim 2 is supported");
  bent_geometry geo;
  geo.grid = grid;
  geo.jac = two_phase_scalar_field(grid);
  geo.dfac = two_phase_scalar_field(grid);
  for (auto& f : geo.pullmat) f = two_phase_scalar_field(grid);
  for (auto& f : geo.cmat) f = two_phase_scalar_field(grid);

  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
      for (int j = 0; j < grid.normal_points; ++j) {
        const Eigen::Vector2d x = bent_detail::node_point(grid, s, t, j);
        const Eigen::Matrix2d m = phi.rotation.transpose() + phi.inverse_bend(x);
        const Eigen::Matrix2d c = m * m.transpose() - Eigen::Matrix2d::Identity();
        const double jac = phi.jacobian(x);
        geo.jac.at(s, t, j) = jac;
        geo.dfac.at(s, t, j) = phi.normal_factor(x);
        for (int r = 0; r < 2; ++r)
          for (int col = 0; col < 2; ++col) {
            geo.pullmat[2 * r + col].at(s, t, j) = m(r, col);
            geo.cmat[2 * r + col].at(s, t, j) = c(r, col);
          }
        geo.max_one_minus_jac = std::max(geo.max_one_minus_jac, std::abs(1.0 - jac));
        geo.max_cmat = std::max(geo.max_cmat, c.cwiseAbs().maxCoeff());
      }
    }
  }
  return geo;
}

/* Off-grid evaluation of one side's samples: Fourier tangentially, the same
 * sliding quintic interpolant normally as the kernel quadrature.  Distances
 * slightly past the trace plane extrapolate the first interval's polynomial,
 * which is how smooth-extension values across the interface are produced. */
struct side_evaluator {
  two_phase_grid grid;
  phase_side side = phase_side::plus;
  std::vector<std::vector<prodint_detail::interval_coeffs>> line;  // per wavenumber
  double tail_fraction = 0.0;  // spectral mass with |wave| >= size/4

  cplx operator()(double x1, double x2) const {
    const int n = grid.normal_points;
    const double h = grid.normal_spacing();
    const double dist = side == phase_side::plus ? x2 : -x2;
    int cell = static_cast<int>(std::floor(dist / h));
    if (cell < 0) cell = 0;
    if (cell > n - 2) cell = n - 2;
    const double tau = dist / h - cell;
    cplx acc{};
    for (int k = 0; k < grid.tangential_size; ++k) {
      const auto& c = line[k][cell].c;
      cplx val = c[5];
      for (int m = 4; m >= 0; --m) val = val * tau + c[m];
      const double phase = grid.frequency(k) * x1;
      acc += val * cplx(std::cos(phase), std::sin(phase));
    }
    return acc / static_cast<double>(grid.tangential_size);
  }
};

inline side_evaluator make_side_evaluator(const two_phase_scalar_field& f, phase_side s) {
  const auto& grid = f.grid;
  if (grid.dim != 2) throw error("side_evaluator: only dim 2 is supported");
  side_evaluator ev;
  ev.grid = grid;
  ev.side = s;
  std::vector<cplx> hat = f.values(s);
  fft::tangential_forward(grid, hat);
  const int n = grid.normal_points;
  ev.line.resize(grid.tangential_size);
  double total = 0.0, tail = 0.0;
  for (int k = 0; k < grid.tangential_size; ++k) {
    ev.line[k] = prodint_detail::interpolate(&hat[static_cast<std::size_t>(k) * n], n);
    double mass = 0.0;
    for (int j = 0; j < n; ++j) mass += std::norm(hat[static_cast<std::size_t>(k) * n + j]);
    total += mass;
    if (std::abs(grid.wave_index(k)) >= grid.tangential_size / 4) tail += mass;
  }
  ev.tail_fraction = total > 0.0 ? tail / total : 0.0;
  return ev;
}

/* Data for the pulled-back flat system, ready for solve_flat. */
struct transformed_data {
  two_phase_vector_field f;   // F_pm = J (A^{-1}+B_{-1}) fb(Phi(x))
  two_phase_scalar_field g;   // J gb(Phi(x))
  two_phase_scalar_field h;   // J d hb(Phi(x))
  double resample_tail = 0.0; // worst spectral tail fraction of the inputs
};

namespace bent_detail {

inline transformed_data transform_data(const two_phase_vector_field& fb,
                                       const two_phase_scalar_field& gb,
                                       const two_phase_scalar_field& hb,
                                       const diffeomorphism& phi, const bent_geometry& geo) {
  const auto& grid = fb.grid;
  if (gb.grid != grid || hb.grid != grid) throw error("transform_data: grid mismatch");

  transformed_data out;
  out.f = two_phase_vector_field(grid);
  out.g = two_phase_scalar_field(grid);
  out.h = two_phase_scalar_field(grid);

  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const side_evaluator ef0 = make_side_evaluator(fb.comp[0], s);
    const side_evaluator ef1 = make_side_evaluator(fb.comp[1], s);
    const side_evaluator eg = make_side_evaluator(gb, s);
    const side_evaluator eh = make_side_evaluator(hb, s);
    out.resample_tail = std::max(
        {out.resample_tail, ef0.tail_fraction, ef1.tail_fraction, eg.tail_fraction,
         eh.tail_fraction});
    for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
      for (int j = 0; j < grid.normal_points; ++j) {
        const Eigen::Vector2d x = node_point(grid, s, t, j);
        /* Chart coordinate of Phi(x) on the rotated raster. */
        const Eigen::Vector2d z = phi.rotation.transpose() * phi.forward(x);
        const cplx f0 = ef0(z[0], z[1]);
        const cplx f1 = ef1(z[0], z[1]);
        const cplx jac = geo.jac.at(s, t, j);
        const cplx dfac = geo.dfac.at(s, t, j);
        out.f.comp[0].at(s, t, j) =
            jac * (geo.pullmat[0].at(s, t, j) * f0 + geo.pullmat[1].at(s, t, j) * f1);
        out.f.comp[1].at(s, t, j) =
            jac * (geo.pullmat[2].at(s, t, j) * f0 + geo.pullmat[3].at(s, t, j) * f1);
        out.g.at(s, t, j) = jac * eg(z[0], z[1]);
        out.h.at(s, t, j) = jac * dfac * eh(z[0], z[1]);
      }
    }
  }
  return out;
}

}  // namespace bent_detail

inline transformed_data transform_data(const two_phase_vector_field& fb,
                                       const two_phase_scalar_field& gb,
                                       const two_phase_scalar_field& hb,
                                       const diffeomorphism& phi) {
  return bent_detail::transform_data(fb, gb, hb, phi, sample_geometry(phi, fb.grid));
}

/* Corrector terms of the pulled-back system.  calf feeds the vector data,
 * calg the source, after per-side density scaling. */
struct perturbation {
  two_phase_vector_field calf;  // (1-J) grad v - J C_{-1} grad v
  two_phase_scalar_field calg;  // lambda (1-J) v
};

namespace bent_detail {

inline perturbation perturbation_terms(const two_phase_scalar_field& v, const bent_geometry& geo,
                                       const resolvent_parameter& lam) {
  if (v.grid != geo.grid) throw error("perturbation_terms: grid mismatch");
  perturbation out;
  out.calf = two_phase_vector_field(v.grid);
  out.calg = two_phase_scalar_field(v.grid);
  const auto grad = gradient(v);
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const std::size_t count = v.grid.side_count();
    for (std::size_t i = 0; i < count; ++i) {
      const cplx jac = geo.jac.values(s)[i];
      const cplx g0 = grad.comp[0].values(s)[i];
      const cplx g1 = grad.comp[1].values(s)[i];
      const cplx one_minus = cplx(1.0) - jac;
      out.calf.comp[0].values(s)[i] =
          one_minus * g0 - jac * (geo.cmat[0].values(s)[i] * g0 + geo.cmat[1].values(s)[i] * g1);
      out.calf.comp[1].values(s)[i] =
          one_minus * g1 - jac * (geo.cmat[2].values(s)[i] * g0 + geo.cmat[3].values(s)[i] * g1);
      out.calg.values(s)[i] = lam.lambda * one_minus * v.values(s)[i];
    }
  }
  return out;
}

}  // namespace bent_detail

inline perturbation perturbation_terms(const two_phase_scalar_field& v, const diffeomorphism& phi,
                                       const resolvent_parameter& lam) {
  return bent_detail::perturbation_terms(v, sample_geometry(phi, v.grid), lam);
}

struct bent_iteration_record {
  double increment = 0.0;  // l2 norm of the iterate difference
  double ratio = 0.0;      // increment / previous increment, 0 on the first step
};

struct bent_options {
  int max_iterations = 100;
  double tolerance = 1e-10;    // relative increment for convergence
  double m1_threshold = 0.25;  // contraction regime, stricter than the map bound
  double lambda_floor = 1.0;   // advertised sector floor; violations are recorded
};

struct bent_solution {
  two_phase_scalar_field v;  // on the rotated raster in bent coordinates
  flat_solution flat;        // converged pulled-back solve, residuals included
  std::vector<bent_iteration_record> history;
  double resample_tail = 0.0;
  bool converged = false;
  bool below_sector_floor = false;
};

inline bent_solution solve_bent(const two_phase_vector_field& fb, const two_phase_scalar_field& gb,
                                const two_phase_scalar_field& hb, const resolvent_parameter& lam,
                                const density_pair& rho, const diffeomorphism& phi,
                                const bent_options& opts = {}) {
  const auto& grid = fb.grid;
  grid.validate();
  if (grid.dim != 2) throw error("solve_bent: only dim 2 is supported");
  if (gb.grid != grid || hb.grid != grid) throw error("solve_bent: grid mismatch");
  if (phi.m1 > opts.m1_threshold) throw error("solve_bent: M1 too large");
  if (lam.is_zero()) {
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      for (const auto& val : gb.values(s))
        if (val != cplx{}) throw error("solve_bent: lambda = 0 requires g = 0");
      for (const auto& val : hb.values(s))
        if (val != cplx{}) throw error("solve_bent: lambda = 0 requires h = 0");
    }
  }

  const bent_geometry geo = sample_geometry(phi, grid);
  const transformed_data data = bent_detail::transform_data(fb, gb, hb, phi, geo);

  bent_solution out;
  out.resample_tail = data.resample_tail;
  out.below_sector_floor = !lam.is_zero() && std::abs(lam.lambda) < opts.lambda_floor;

  two_phase_scalar_field v(grid);
  double prev_increment = 0.0;
  int stalled = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    two_phase_vector_field feff = data.f;
    two_phase_scalar_field geff = data.g;
    if (it > 1 && !geo.perturbation_vanishes()) {
      const perturbation pert = bent_detail::perturbation_terms(v, geo, lam);
      for (int c = 0; c < 2; ++c) axpy(feff.comp[c], cplx(1.0), pert.calf.comp[c]);
      for (phase_side s : {phase_side::plus, phase_side::minus}) {
        const cplx weight = s == phase_side::plus ? rho.plus : rho.minus;
        const auto& src = pert.calg.values(s);
        auto& dst = geff.values(s);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += weight * src[i];
      }
    }
    flat_solution sol = solve_flat(feff, geff, data.h, lam, rho);

    two_phase_scalar_field diff = sol.v;
    axpy(diff, cplx(-1.0), v);
    const double increment = l2_norm(diff);
    const double vnorm = l2_norm(sol.v);
    bent_iteration_record rec;
    rec.increment = increment;
    rec.ratio = prev_increment > 0.0 ? increment / prev_increment : 0.0;
    out.history.push_back(rec);

    v = sol.v;
    out.flat = std::move(sol);

    const double rel = vnorm > 0.0 ? increment / vnorm : increment;
    if (rel < opts.tolerance || geo.perturbation_vanishes()) {
      out.converged = true;
      break;
    }
    if (it > 1) {
      stalled = rec.ratio >= 1.0 ? stalled + 1 : 0;
      if (stalled >= 3) throw error("solve_bent: not contracting");
    }
    prev_increment = increment;
  }

  /* Push forward: vtilde(A x_node) = v(Phi^{-1}(A x_node)). */
  out.v = two_phase_scalar_field(grid);
  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const side_evaluator ev = make_side_evaluator(v, s);
    for (std::size_t t = 0; t < grid.tangential_count(); ++t) {
      for (int j = 0; j < grid.normal_points; ++j) {
        const Eigen::Vector2d y = phi.rotation * bent_detail::node_point(grid, s, t, j);
        const Eigen::Vector2d x = phi.inverse(y);
        out.v.at(s, t, j) = ev(x[0], x[1]);
      }
    }
  }
  return out;
}

}  // namespace twophase
