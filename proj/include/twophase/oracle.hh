#pragma once

/*
 * Independent finite-difference oracle for the transmission systems.
 *
 * Deliberately boring second-order discretizations, sharing no solver code
 * with the spectral path: plain Laplacian stencils per phase, doubled
 * interface unknowns coupled by the two jump conditions, sparse LU behind a
 * residual gate.  Two geometries:
 *
 *   flat    tangentially periodic box, interface on the grid plane x_N = 0,
 *           outer planes x_N = +-L carry Dirichlet values (zero for the
 *           truncated-decay closure) and are eliminated during assembly;
 *   circle  polar staggered finite volumes, cell centers at (k+1/2)*dr,
 *           the interface and the outer boundary both fall on cell faces,
 *           interface values are explicit unknowns tied to the cells by
 *           one-sided face derivatives.
 *
 * The oracle is a correctness instrument; nothing here is fast.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "twophase/common.hh"
#include "twophase/field.hh"
#include "twophase/grid.hh"

namespace twophase {

enum class oracle_bc { dirichlet_outer, truncated_decay };

namespace oracle_detail {

using triplet = Eigen::Triplet<cplx>;

/* Coefficient of an eliminated Dirichlet node: moves to the right-hand side
 * with opposite sign once boundary data is known. */
struct boundary_term {
  int row;
  int side;  // 0 = plus, 1 = minus
  std::size_t tangential;
  cplx coefficient;
};

inline std::size_t tangential_neighbor(const two_phase_grid& g, std::size_t t, int d,
                                       int step) {
  auto idx = g.tangential_multi_index(t);
  idx[d] = (idx[d] + step + g.tangential_size) % g.tangential_size;
  std::size_t flat = 0;
  for (int e = 0; e < g.tangential_dims(); ++e)
    flat = flat * g.tangential_size + static_cast<std::size_t>(idx[e]);
  return flat;
}

}  // namespace oracle_detail

/*
 * Flat geometry.  Unknowns are the normal layers j = 0 .. normal_points-2
 * per side and tangential node; j = 0 is the doubled interface layer whose
 * two rows hold the jump conditions, j = normal_points-1 is the eliminated
 * Dirichlet plane.  Interior rows are the (2N+1)-point stencil of
 * rho*lambda - Delta.
 */
struct flat_oracle_system {
  two_phase_grid grid;
  density_pair rho{1.0, 1.0};
  cplx lambda{};
  oracle_bc bc = oracle_bc::truncated_decay;

  Eigen::SparseMatrix<cplx> matrix;
  std::vector<oracle_detail::boundary_term> boundary_terms;

  int layers() const { return grid.normal_points - 1; }
  int index(phase_side s, std::size_t t, int j) const {
    const int side_offset = s == phase_side::plus ? 0 : 1;
    return static_cast<int>((side_offset * grid.tangential_count() + t) * layers()) + j;
  }
  int unknowns() const { return static_cast<int>(2 * grid.tangential_count() * layers()); }
};

struct flat_oracle_data {
  /* Right-hand side -div f + g sampled per node; interface and outer layers
   * of the field are ignored (their rows carry jump and boundary data). */
  two_phase_scalar_field source;
  std::vector<cplx> jump_value;  // rho_+ v_+ - rho_- v_- at x_N = 0
  std::vector<cplx> jump_flux;   // d_N v_+ - d_N v_- at x_N = 0
  std::vector<cplx> dirichlet_plus, dirichlet_minus;

  explicit flat_oracle_data(const two_phase_grid& g)
      : source(g),
        jump_value(g.tangential_count()),
        jump_flux(g.tangential_count()),
        dirichlet_plus(g.tangential_count()),
        dirichlet_minus(g.tangential_count()) {}
};

inline flat_oracle_system assemble_flat_transmission(const two_phase_grid& grid,
                                                     const density_pair& rho, cplx lambda,
                                                     oracle_bc bc) {
  /* Lighter requirements than the spectral grid contract: no FFT runs here,
   * so neither power-of-two tangential sizes nor the 8-sample minimum apply.
   * This is what lets the hand-checkable 4x4 micro system exist. */
  if (grid.normal_points < 3) throw error("flat oracle: need at least 3 normal samples");
  if (grid.tangential_size < 1 || !(grid.tangential_period > 0.0) ||
      !(grid.normal_half_extent > 0.0))
    throw error("flat oracle: interface unresolved");
  flat_oracle_system sys;
  sys.grid = grid;
  sys.rho = rho;
  sys.lambda = lambda;
  sys.bc = bc;

  const int n = grid.normal_points;
  const int layers = n - 1;
  const double hn = grid.normal_spacing();
  const double ht = grid.tangential_spacing();
  const std::size_t tc = grid.tangential_count();

  std::vector<oracle_detail::triplet> trip;
  trip.reserve(static_cast<std::size_t>(sys.unknowns()) * (2 * grid.dim + 1));

  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const double r = rho.of(s == phase_side::plus);
    const int side = s == phase_side::plus ? 0 : 1;
    for (std::size_t t = 0; t < tc; ++t) {
      /* Interior rows j = 1 .. layers-1.  Signs follow rho*lambda*v - Delta v;
       * the normal coordinate per side is the distance, which only flips the
       * normal first derivative, not the Laplacian. */
      for (int j = 1; j < layers; ++j) {
        const int row = sys.index(s, t, j);
        cplx diag = r * lambda + 2.0 / (hn * hn) +
                    2.0 * static_cast<double>(grid.tangential_dims()) / (ht * ht);
        trip.emplace_back(row, row, diag);
        for (int pm : {-1, 1}) {
          const int jn = j + pm;
          if (jn < layers) {
            trip.emplace_back(row, sys.index(s, t, jn), cplx(-1.0 / (hn * hn)));
          } else {
            sys.boundary_terms.push_back({row, side, t, cplx(-1.0 / (hn * hn))});
          }
        }
        for (int d = 0; d < grid.tangential_dims(); ++d)
          for (int pm : {-1, 1}) {
            const std::size_t tn = oracle_detail::tangential_neighbor(grid, t, d, pm);
            trip.emplace_back(row, sys.index(s, tn, j), cplx(-1.0 / (ht * ht)));
          }
      }
    }
  }

  /* Interface rows: the plus j=0 slot holds the weighted continuity, the
   * minus j=0 slot the one-sided normal-derivative jump.  d_N on the minus
   * side is minus the distance derivative. */
  for (std::size_t t = 0; t < tc; ++t) {
    const int row_c = sys.index(phase_side::plus, t, 0);
    trip.emplace_back(row_c, sys.index(phase_side::plus, t, 0), cplx(rho.plus));
    trip.emplace_back(row_c, sys.index(phase_side::minus, t, 0), cplx(-rho.minus));

    const int row_f = sys.index(phase_side::minus, t, 0);
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      const int side = s == phase_side::plus ? 0 : 1;
      /* distance derivative (-3 v0 + 4 v1 - v2)/(2h); both side orientations
       * contribute with the same sign to d_N v_+ - d_N v_-. */
      const double c0 = -3.0 / (2.0 * hn), c1 = 4.0 / (2.0 * hn), c2 = -1.0 / (2.0 * hn);
      trip.emplace_back(row_f, sys.index(s, t, 0), cplx(c0));
      trip.emplace_back(row_f, sys.index(s, t, 1), cplx(c1));
      if (2 < sys.layers())
        trip.emplace_back(row_f, sys.index(s, t, 2), cplx(c2));
      else
        sys.boundary_terms.push_back({row_f, side, t, cplx(c2)});
    }
  }

  sys.matrix.resize(sys.unknowns(), sys.unknowns());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

/* Coefficient samples for the pulled-back bent transmission system
 *     rho lambda J v - div(a grad v) = J s(Phi(x)),    a = J (I + C_{-1}),
 * with the conormal jump e_N . (a grad v_+ - a grad v_-) prescribed at the
 * interface.  a is symmetric, so three entry fields suffice; jac carries J
 * for the zeroth-order term.  Samples live on the flat grid with the usual
 * signed normal coordinate per side. */
struct bent_oracle_coefficients {
  two_phase_scalar_field a11, a12, a22, jac;

  explicit bent_oracle_coefficients(const two_phase_grid& g) : a11(g), a12(g), a22(g), jac(g) {}
};

inline flat_oracle_system assemble_bent_transmission(const two_phase_grid& grid,
                                                     const density_pair& rho, cplx lambda,
                                                     const bent_oracle_coefficients& coeff,
                                                     oracle_bc bc) {
  if (grid.dim != 2) throw error("bent oracle: only dim 2 is supported");
  if (grid.normal_points < 3) throw error("bent oracle: need at least 3 normal samples");
  if (grid.tangential_size < 3) throw error("bent oracle: interface unresolved");
  if (coeff.a11.grid != grid || coeff.a12.grid != grid || coeff.a22.grid != grid ||
      coeff.jac.grid != grid)
    throw error("bent oracle: coefficient grid mismatch");

  flat_oracle_system sys;
  sys.grid = grid;
  sys.rho = rho;
  sys.lambda = lambda;
  sys.bc = bc;

  const int layers = grid.normal_points - 1;
  const double hn = grid.normal_spacing();
  const double ht = grid.tangential_spacing();
  const std::size_t tc = grid.tangential_count();

  std::vector<oracle_detail::triplet> trip;
  trip.reserve(static_cast<std::size_t>(sys.unknowns()) * 11);

  /* Emit an entry, diverting outer-layer columns to the Dirichlet terms. */
  const auto emit = [&](int row, phase_side s, std::size_t t, int j, cplx val) {
    const int side = s == phase_side::plus ? 0 : 1;
    if (j < layers)
      trip.emplace_back(row, sys.index(s, t, j), val);
    else
      sys.boundary_terms.push_back({row, side, t, val});
  };

  for (phase_side s : {phase_side::plus, phase_side::minus}) {
    const double r = rho.of(s == phase_side::plus);
    /* x_2 = sgn * distance; the mixed derivative terms carry one factor. */
    const double sgn = s == phase_side::plus ? 1.0 : -1.0;
    for (std::size_t t = 0; t < tc; ++t) {
      const std::size_t tr = oracle_detail::tangential_neighbor(grid, t, 0, 1);
      const std::size_t tl = oracle_detail::tangential_neighbor(grid, t, 0, -1);
      for (int j = 1; j < layers; ++j) {
        const int row = sys.index(s, t, j);
        trip.emplace_back(row, row, r * lambda * coeff.jac.at(s, t, j));

        /* -d_xi(a22 d_xi v) with half-point averages. */
        const cplx up = 0.5 * (coeff.a22.at(s, t, j) + coeff.a22.at(s, t, j + 1));
        const cplx down = 0.5 * (coeff.a22.at(s, t, j) + coeff.a22.at(s, t, j - 1));
        trip.emplace_back(row, row, (up + down) / (hn * hn));
        emit(row, s, t, j + 1, -up / (hn * hn));
        emit(row, s, t, j - 1, -down / (hn * hn));

        /* -d_1(a11 d_1 v). */
        const cplx right = 0.5 * (coeff.a11.at(s, t, j) + coeff.a11.at(s, tr, j));
        const cplx left = 0.5 * (coeff.a11.at(s, t, j) + coeff.a11.at(s, tl, j));
        trip.emplace_back(row, row, (right + left) / (ht * ht));
        trip.emplace_back(row, sys.index(s, tr, j), -right / (ht * ht));
        trip.emplace_back(row, sys.index(s, tl, j), -left / (ht * ht));

        /* -sgn {d_1(a12 d_xi v) + d_xi(a12 d_1 v)}, centered four-corner. */
        const double w = sgn / (4.0 * ht * hn);
        const cplx ar = coeff.a12.at(s, tr, j), al = coeff.a12.at(s, tl, j);
        const cplx au = coeff.a12.at(s, t, j + 1), ad = coeff.a12.at(s, t, j - 1);
        emit(row, s, tr, j + 1, -w * (ar + au));
        emit(row, s, tr, j - 1, w * (ar + ad));
        emit(row, s, tl, j + 1, w * (al + au));
        emit(row, s, tl, j - 1, -w * (al + ad));
      }
    }
  }

  /* Interface rows: weighted continuity in the plus j=0 slot, conormal flux
   * jump in the minus slot.  The conormal from each side is
   * a12 d_1 v + sgn a22 d_xi v, and d_N v_- = -d_xi v_-, so the one-sided
   * normal stencils enter with the same sign on both sides. */
  for (std::size_t t = 0; t < tc; ++t) {
    const int row_c = sys.index(phase_side::plus, t, 0);
    trip.emplace_back(row_c, sys.index(phase_side::plus, t, 0), cplx(rho.plus));
    trip.emplace_back(row_c, sys.index(phase_side::minus, t, 0), cplx(-rho.minus));

    const int row_f = sys.index(phase_side::minus, t, 0);
    const std::size_t tr = oracle_detail::tangential_neighbor(grid, t, 0, 1);
    const std::size_t tl = oracle_detail::tangential_neighbor(grid, t, 0, -1);
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      const double sgn = s == phase_side::plus ? 1.0 : -1.0;
      const cplx a12v = sgn * coeff.a12.at(s, t, 0);
      trip.emplace_back(row_f, sys.index(s, tr, 0), a12v / (2.0 * ht));
      trip.emplace_back(row_f, sys.index(s, tl, 0), -a12v / (2.0 * ht));
      const cplx a22v = coeff.a22.at(s, t, 0);
      emit(row_f, s, t, 0, a22v * (-3.0) / (2.0 * hn));
      emit(row_f, s, t, 1, a22v * 4.0 / (2.0 * hn));
      emit(row_f, s, t, 2, a22v * (-1.0) / (2.0 * hn));
    }
  }

  sys.matrix.resize(sys.unknowns(), sys.unknowns());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

inline two_phase_scalar_field oracle_solve(const flat_oracle_system& sys,
                                           const flat_oracle_data& data) {
  const two_phase_grid& grid = sys.grid;
  const std::size_t tc = grid.tangential_count();
  const int layers = sys.layers();

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sys.unknowns());
  for (phase_side s : {phase_side::plus, phase_side::minus})
    for (std::size_t t = 0; t < tc; ++t)
      for (int j = 1; j < layers; ++j)
        rhs[sys.index(s, t, j)] = data.source.at(s, t, j);
  for (std::size_t t = 0; t < tc; ++t) {
    rhs[sys.index(phase_side::plus, t, 0)] = data.jump_value[t];
    rhs[sys.index(phase_side::minus, t, 0)] = data.jump_flux[t];
  }
  for (const auto& b : sys.boundary_terms) {
    const cplx value = b.side == 0 ? data.dirichlet_plus[b.tangential]
                                   : data.dirichlet_minus[b.tangential];
    rhs[b.row] -= b.coefficient * value;
  }

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) throw error("oracle_solve: solver failed");
  Eigen::VectorXcd x = lu.solve(rhs);
  const double scale = std::max(rhs.norm(), 1.0);
  if ((sys.matrix * x - rhs).norm() > 1e-10 * scale)
    throw error("oracle_solve: solver failed");

  two_phase_scalar_field out(grid);
  for (phase_side s : {phase_side::plus, phase_side::minus})
    for (std::size_t t = 0; t < tc; ++t) {
      for (int j = 0; j < layers; ++j) out.at(s, t, j) = x[sys.index(s, t, j)];
      out.at(s, t, layers) = s == phase_side::plus ? data.dirichlet_plus[t]
                                                   : data.dirichlet_minus[t];
    }
  return out;
}

/*
 * Circle geometry.  Phase plus is the disk r < R, phase minus the annulus
 * R < r < R_out.  dr = R / radial_cells_inner must divide R_out as well so
 * both the interface and the outer boundary sit on faces ("interface
 * unresolved" otherwise).  The innermost cell has a zero-area inner face,
 * so no pole condition is needed.
 */
struct circle_geometry {
  double interface_radius = 1.0;
  double outer_radius = 2.0;
  int radial_cells_inner = 16;
  int angular_size = 32;

  double dr() const { return interface_radius / radial_cells_inner; }
  int radial_cells_total() const {
    return static_cast<int>(std::lround(outer_radius / dr()));
  }
  double cell_radius(int k) const { return (k + 0.5) * dr(); }
  double cell_angle(int m) const { return 2 * pi * m / angular_size; }
  double cell_area(int k) const { return cell_radius(k) * dr() * 2 * pi / angular_size; }
  bool cell_is_plus(int k) const { return k < radial_cells_inner; }

  void validate() const {
    if (!(interface_radius > 0.0) || !(outer_radius > interface_radius))
      throw error("circle_geometry: radii must satisfy 0 < R < R_out");
    if (angular_size < 4) throw error("circle_geometry: need at least 4 angles");
    if (radial_cells_inner < 2 || radial_cells_total() - radial_cells_inner < 2)
      throw error("circle_geometry: interface unresolved");
    if (std::abs(radial_cells_total() * dr() - outer_radius) > 1e-12 * outer_radius)
      throw error("circle_geometry: interface unresolved");
  }
};

struct circle_oracle_system {
  circle_geometry geom;
  density_pair rho{1.0, 1.0};
  cplx lambda{};

  Eigen::SparseMatrix<cplx> matrix;
  std::vector<cplx> outer_coupling;  // per angular index, coefficient of the
                                     // Dirichlet value in the last cell row

  int cell_index(int k, int m) const { return k * geom.angular_size + m; }
  int interface_index(phase_side s, int m) const {
    const int base = geom.radial_cells_total() * geom.angular_size;
    return base + (s == phase_side::plus ? 0 : geom.angular_size) + m;
  }
  int unknowns() const {
    return (geom.radial_cells_total() + 2) * geom.angular_size;
  }
};

struct circle_oracle_data {
  std::vector<cplx> source;      // cell-centered -div f + g, k*M + m layout
  std::vector<cplx> jump_value;  // rho_+ v_+ - rho_- v_- on r = R
  std::vector<cplx> jump_flux;   // d_r v_+ - d_r v_- on r = R
  std::vector<cplx> outer_dirichlet;

  explicit circle_oracle_data(const circle_geometry& g)
      : source(static_cast<std::size_t>(g.radial_cells_total()) * g.angular_size),
        jump_value(g.angular_size),
        jump_flux(g.angular_size),
        outer_dirichlet(g.angular_size) {}
};

struct circle_solution {
  circle_geometry geom;
  std::vector<cplx> cells;
  std::vector<cplx> interface_plus, interface_minus;
};

inline circle_oracle_system assemble_circle_transmission(const circle_geometry& geom,
                                                         const density_pair& rho,
                                                         cplx lambda) {
  geom.validate();
  circle_oracle_system sys;
  sys.geom = geom;
  sys.rho = rho;
  sys.lambda = lambda;
  sys.outer_coupling.assign(geom.angular_size, cplx{});

  const int K = geom.radial_cells_total();
  const int K1 = geom.radial_cells_inner;
  const int M = geom.angular_size;
  const double dr = geom.dr();
  const double dth = 2 * pi / M;
  const double R = geom.interface_radius;
  const double Ro = geom.outer_radius;

  std::vector<oracle_detail::triplet> trip;
  trip.reserve(static_cast<std::size_t>(sys.unknowns()) * 8);

  /* One-sided face derivative from the face value and the two nearest cell
   * centers (distances dr/2 and 3dr/2):  f'(face) = (8 f_face - 9 f_1 + f_2)
   * / (3 dr), with f_1 the adjacent cell.  Signs below orient the derivative
   * outward in r on both sides of a face. */
  const double cf = 8.0 / (3.0 * dr), c1 = -9.0 / (3.0 * dr), c2 = 1.0 / (3.0 * dr);

  for (int k = 0; k < K; ++k) {
    const double r = rho.of(geom.cell_is_plus(k));
    const double rk = geom.cell_radius(k);
    for (int m = 0; m < M; ++m) {
      const int row = sys.cell_index(k, m);
      cplx diag = r * lambda + 2.0 / (rk * rk * dth * dth);
      trip.emplace_back(row, sys.cell_index(k, (m + 1) % M), cplx(-1.0 / (rk * rk * dth * dth)));
      trip.emplace_back(row, sys.cell_index(k, (m + M - 1) % M), cplx(-1.0 / (rk * rk * dth * dth)));

      /* Inner face flux r_face * dv/dr, divided by rk*dr. */
      if (k == 0) {
        ;  // face radius zero, no flux
      } else if (k == K1) {
        /* inner face on the interface: flux from the mirrored one-sided
         * derivative (-8 vR + 9 v_K1 - v_{K1+1})/(3 dr) */
        const double rf = R / (rk * dr);
        trip.emplace_back(row, sys.interface_index(phase_side::minus, m), cplx(-rf * cf));
        diag += -rf * c1;
        trip.emplace_back(row, sys.cell_index(k + 1, m), cplx(-rf * c2));
      } else {
        const double rf = (k * dr) / (rk * dr);
        diag += rf / dr;
        trip.emplace_back(row, sys.cell_index(k - 1, m), cplx(-rf / dr));
      }

      /* Outer face flux. */
      if (k == K1 - 1) {
        /* outer face on the interface: (8 vR - 9 v_{K1-1} + v_{K1-2})/(3 dr) */
        const double rf = R / (rk * dr);
        trip.emplace_back(row, sys.interface_index(phase_side::plus, m), cplx(-rf * cf));
        diag += -rf * c1;
        trip.emplace_back(row, sys.cell_index(k - 1, m), cplx(-rf * c2));
      } else if (k == K - 1) {
        const double rf = Ro / (rk * dr);
        sys.outer_coupling[m] = -rf * cf;  // Dirichlet value, to the rhs
        diag += -rf * c1;
        trip.emplace_back(row, sys.cell_index(k - 1, m), cplx(-rf * c2));
      } else {
        const double rf = ((k + 1) * dr) / (rk * dr);
        diag += rf / dr;
        trip.emplace_back(row, sys.cell_index(k + 1, m), cplx(-rf / dr));
      }

      trip.emplace_back(row, row, diag);
    }
  }

  /* Interface rows: weighted continuity and the radial-derivative jump,
   * both built from the same one-sided face derivatives. */
  for (int m = 0; m < M; ++m) {
    const int row_c = sys.interface_index(phase_side::plus, m);
    trip.emplace_back(row_c, sys.interface_index(phase_side::plus, m), cplx(rho.plus));
    trip.emplace_back(row_c, sys.interface_index(phase_side::minus, m), cplx(-rho.minus));

    const int row_f = sys.interface_index(phase_side::minus, m);
    /* d_r v_+ - d_r v_-: the plus side sits below the face, the minus side
     * above, so after the mirror flip both one-sided stencils enter with the
     * same signs. */
    trip.emplace_back(row_f, sys.interface_index(phase_side::plus, m), cplx(cf));
    trip.emplace_back(row_f, sys.cell_index(K1 - 1, m), cplx(c1));
    trip.emplace_back(row_f, sys.cell_index(K1 - 2, m), cplx(c2));
    trip.emplace_back(row_f, sys.interface_index(phase_side::minus, m), cplx(cf));
    trip.emplace_back(row_f, sys.cell_index(K1, m), cplx(c1));
    trip.emplace_back(row_f, sys.cell_index(K1 + 1, m), cplx(c2));
  }

  sys.matrix.resize(sys.unknowns(), sys.unknowns());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

inline circle_solution oracle_solve(const circle_oracle_system& sys,
                                    const circle_oracle_data& data) {
  const int K = sys.geom.radial_cells_total();
  const int M = sys.geom.angular_size;

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sys.unknowns());
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m)
      rhs[sys.cell_index(k, m)] = data.source[static_cast<std::size_t>(k) * M + m];
  for (int m = 0; m < M; ++m) {
    rhs[sys.cell_index(K - 1, m)] -= sys.outer_coupling[m] * data.outer_dirichlet[m];
    rhs[sys.interface_index(phase_side::plus, m)] = data.jump_value[m];
    rhs[sys.interface_index(phase_side::minus, m)] = data.jump_flux[m];
  }

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) throw error("oracle_solve: solver failed");
  Eigen::VectorXcd x = lu.solve(rhs);
  const double scale = std::max(rhs.norm(), 1.0);
  if ((sys.matrix * x - rhs).norm() > 1e-10 * scale)
    throw error("oracle_solve: solver failed");

  circle_solution out;
  out.geom = sys.geom;
  out.cells.resize(static_cast<std::size_t>(K) * M);
  out.interface_plus.resize(M);
  out.interface_minus.resize(M);
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m)
      out.cells[static_cast<std::size_t>(k) * M + m] = x[sys.cell_index(k, m)];
  for (int m = 0; m < M; ++m) {
    out.interface_plus[m] = x[sys.interface_index(phase_side::plus, m)];
    out.interface_minus[m] = x[sys.interface_index(phase_side::minus, m)];
  }
  return out;
}

/* Cell-area-weighted relative L2 distance between two circle solutions on a
 * common geometry, restricted to cells with radius <= r_max. */
inline double circle_relative_l2(const circle_solution& a, const std::vector<cplx>& ref,
                                 double r_max) {
  const int K = a.geom.radial_cells_total();
  const int M = a.geom.angular_size;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < K; ++k) {
    if (a.geom.cell_radius(k) > r_max) break;
    for (int m = 0; m < M; ++m) {
      const std::size_t i = static_cast<std::size_t>(k) * M + m;
      const double w = a.geom.cell_area(k);
      num += w * std::norm(a.cells[i] - ref[i]);
      den += w * std::norm(ref[i]);
    }
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace twophase
