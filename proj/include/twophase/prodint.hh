#pragma once

/*
 * Product integration against exponential kernels.
 *
 * Half-line data sampled at y = j*h is interpolated by sliding quintic
 * stencils (6 nodes, one-sided near the ends, never across a segment
 * boundary) and integrated exactly against e^{-A t}.  On top of that sit
 * the kernel solves used by the whole-space operators:
 *
 *   value(x)  = (1/2A) int_R e^{-A|x-y|} q_ext(y) dy,
 *   q_ext(y) = q(y) for y > 0,  parity * q(-y) for y < 0,
 *
 * realized as two O(n) recursive sweeps plus one reflection functional.
 * Every factor that appears is e^{-A s} with s >= 0 and Re A >= 0, so the
 * evaluation is stable for arbitrarily large |A| h.  The A = 0 limit
 * (tangential zero mode of the Laplace problem) replaces the kernel by
 * -|x-y|/2, the principal-value limit of the multiplier, with polynomial
 * moment sweeps.
 */

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "twophase/common.hh"

namespace twophase {

/* mu_m = int_0^h t^m e^{-A t} dt, m = 0..5.  Series below |A|h = 2 (the
 * upward recurrence loses ~m!/|Ah|^m digits), recurrence above. */
inline std::array<cplx, 6> exp_moments(cplx A, double h) {
  std::array<cplx, 6> mu;
  const double ah = std::abs(A) * h;
  if (ah <= 2.0) {
    const cplx z = -A * h;
    for (int m = 0; m < 6; ++m) {
      cplx term(1.0, 0.0);
      cplx sum = term / static_cast<double>(m + 1);
      for (int k = 1; k < 60; ++k) {
        term *= z / static_cast<double>(k);
        const cplx add = term / static_cast<double>(m + k + 1);
        sum += add;
        if (std::abs(add) < 1e-20 * std::abs(sum)) break;
      }
      mu[m] = std::pow(h, m + 1) * sum;
    }
  } else {
    const cplx e = std::exp(-A * h);
    mu[0] = (1.0 - e) / A;
    double hm = 1.0;
    for (int m = 1; m < 6; ++m) {
      hm *= h;
      mu[m] = (static_cast<double>(m) * mu[m - 1] - hm * e) / A;
    }
  }
  return mu;
}

namespace prodint_detail {

/* Quintic interpolation on the unit interval of interval i with stencil
 * start i - shift: monomial coefficients c = Q[shift] * samples, where the
 * polynomial is in the local variable tau in [0,1] and samples sit at
 * tau = k - shift, k = 0..5. */
inline const std::array<Eigen::Matrix<double, 6, 6>, 5>& quintic_tables() {
  static const auto tables = [] {
    std::array<Eigen::Matrix<double, 6, 6>, 5> t;
    for (int shift = 0; shift < 5; ++shift) {
      Eigen::Matrix<double, 6, 6> v;
      for (int k = 0; k < 6; ++k) {
        const double tau = k - shift;
        double p = 1.0;
        for (int m = 0; m < 6; ++m) {
          v(k, m) = p;
          p *= tau;
        }
      }
      t[shift] = v.inverse();
    }
    return t;
  }();
  return tables;
}

/* Coefficient flip: p(1 - u) as a polynomial in u. */
inline const Eigen::Matrix<double, 6, 6>& flip_table() {
  static const auto flip = [] {
    Eigen::Matrix<double, 6, 6> r = Eigen::Matrix<double, 6, 6>::Zero();
    // (1-u)^m = sum_l binom(m,l) (-u)^l
    double binom[6][6] = {};
    for (int m = 0; m < 6; ++m) {
      binom[m][0] = 1.0;
      for (int l = 1; l <= m; ++l)
        binom[m][l] = binom[m - 1][l - 1] + (l <= m - 1 ? binom[m - 1][l] : 0.0);
    }
    for (int m = 0; m < 6; ++m)
      for (int l = 0; l <= m; ++l) r(l, m) = binom[m][l] * ((l % 2) ? -1.0 : 1.0);
    return r;
  }();
  return flip;
}

struct interval_coeffs {
  std::array<cplx, 6> c;  // monomial coefficients in tau over [0,1]
};

/* Per-interval quintic coefficients for samples q[0..n-1]; interval i
 * spans [i, i+1] in grid units, i = 0..n-2. */
inline std::vector<interval_coeffs> interpolate(const cplx* q, int n) {
  if (n < 6) throw error("prodint: need at least 6 samples");
  const auto& tables = quintic_tables();
  std::vector<interval_coeffs> out(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    int start = i - 2;
    if (start < 0) start = 0;
    if (start > n - 6) start = n - 6;
    const int shift = i - start;
    const auto& Q = tables[shift];
    for (int m = 0; m < 6; ++m) {
      cplx acc{};
      for (int k = 0; k < 6; ++k) acc += Q(m, k) * q[start + k];
      out[i].c[m] = acc;
    }
  }
  return out;
}

}  // namespace prodint_detail

/* int_0^{(n-1)h} e^{-A y} f(y) dy with quintic product integration. */
inline cplx exp_weighted_integral(const cplx* f, int n, double h, cplx A) {
  const auto coeffs = prodint_detail::interpolate(f, n);
  const auto mu = exp_moments(A, h);
  std::array<cplx, 6> muh;  // mu_m / h^m: integrates tau-monomials
  double hm = 1.0;
  for (int m = 0; m < 6; ++m) {
    muh[m] = mu[m] / hm;
    hm *= h;
  }
  const cplx decay = std::exp(-A * h);
  cplx prefactor(1.0, 0.0);  // e^{-A x_i}
  cplx acc{};
  for (const auto& iv : coeffs) {
    cplx local{};
    for (int m = 0; m < 6; ++m) local += iv.c[m] * muh[m];
    acc += prefactor * local;
    prefactor *= decay;
  }
  return acc;
}

struct halfline_potential {
  std::vector<cplx> value;
  std::vector<cplx> derivative;  // with respect to the distance variable
  cplx data_integral{};          // int_0^L e^{-A y} q dy (the reflection functional)
};

/* Kernel solve for (rho lambda + |xi'|^2 - d^2/dy^2) u = q_ext on the whole
 * line, A = sqrt(rho lambda + |xi'|^2), evaluated at the sample nodes of
 * the own half-line.  parity = +1 even extension, -1 odd extension. */
inline halfline_potential exp_kernel_solve(const cplx* q, int n, double h, cplx A, double parity) {
  if (!(A.real() > 0.0)) throw error("prodint: kernel decay requires Re A > 0");
  const auto coeffs = prodint_detail::interpolate(q, n);
  const auto mu = exp_moments(A, h);
  const auto& flip = prodint_detail::flip_table();
  std::array<cplx, 6> muh;
  double hm = 1.0;
  for (int m = 0; m < 6; ++m) {
    muh[m] = mu[m] / hm;
    hm *= h;
  }
  const cplx decay = std::exp(-A * h);

  // forward[i] = int over interval i of e^{-A (y - x_i)} p(y) dy,
  // backward[i] = same with e^{-A (x_{i+1} - y)}
  const int ni = n - 1;
  std::vector<cplx> fwd(ni), bwd(ni);
  for (int i = 0; i < ni; ++i) {
    cplx f{}, b{};
    std::array<cplx, 6> flipped{};
    for (int l = 0; l < 6; ++l)
      for (int m = l; m < 6; ++m) flipped[l] += flip(l, m) * coeffs[i].c[m];
    for (int m = 0; m < 6; ++m) {
      f += coeffs[i].c[m] * muh[m];
      b += flipped[m] * muh[m];
    }
    fwd[i] = f;
    bwd[i] = b;
  }

  halfline_potential out;
  out.value.resize(n);
  out.derivative.resize(n);

  // below[j] = int_0^{x_j} e^{-A(x_j - y)} q dy
  std::vector<cplx> below(n), above(n);
  below[0] = cplx{};
  for (int j = 1; j < n; ++j) below[j] = decay * below[j - 1] + bwd[j - 1];
  above[n - 1] = cplx{};
  for (int j = n - 2; j >= 0; --j) above[j] = decay * above[j + 1] + fwd[j];

  cplx Jint{};
  {
    cplx prefactor(1.0, 0.0);
    for (int i = 0; i < ni; ++i) {
      Jint += prefactor * fwd[i];
      prefactor *= decay;
    }
  }
  out.data_integral = Jint;

  cplx refl(1.0, 0.0);  // e^{-A x_j}
  for (int j = 0; j < n; ++j) {
    const cplx mirror = parity * refl * Jint;
    out.value[j] = (below[j] + above[j] + mirror) / (2.0 * A);
    out.derivative[j] = (above[j] - below[j] - mirror) / 2.0;
    refl *= decay;
  }
  return out;
}

/* A = 0 limit: -u'' = q_ext, kernel -|x-y|/2 (the principal-value limit of
 * the harmonic multiplier's zero mode).  The odd case has zero interface
 * trace; the even case requires int q_ext = 0 for decay at infinity and is
 * the caller's responsibility. */
inline halfline_potential absolute_kernel_solve(const cplx* q, int n, double h, double parity) {
  const auto coeffs = prodint_detail::interpolate(q, n);
  const int ni = n - 1;
  // polynomial moments per interval: int p dt and int (y - x_i) p dt
  std::vector<cplx> m0(ni), m1(ni);
  for (int i = 0; i < ni; ++i) {
    cplx a0{}, a1{};
    for (int m = 0; m < 6; ++m) {
      a0 += coeffs[i].c[m] * (h / (m + 1));
      a1 += coeffs[i].c[m] * (h * h / (m + 2));
    }
    m0[i] = a0;
    m1[i] = a1;
  }

  // below0[j] = int_0^{x_j} q, below1[j] = int_0^{x_j} y q
  std::vector<cplx> below0(n), below1(n);
  below0[0] = below1[0] = cplx{};
  for (int j = 1; j < n; ++j) {
    const double xi = (j - 1) * h;
    below0[j] = below0[j - 1] + m0[j - 1];
    below1[j] = below1[j - 1] + xi * m0[j - 1] + m1[j - 1];
  }
  const cplx total0 = below0[n - 1];

  halfline_potential out;
  out.value.resize(n);
  out.derivative.resize(n);
  out.data_integral = total0;

  for (int j = 0; j < n; ++j) {
    const double x = j * h;
    const cplx above0 = total0 - below0[j];
    // odd case collapses to M1_below + x M0_above; keep the general form
    const cplx own = x * below0[j] - below1[j] + (below1[n - 1] - below1[j]) - x * above0;
    const cplx mirrored = x * total0 + below1[n - 1];
    out.value[j] = -0.5 * (own + parity * mirrored);
    out.derivative[j] = -0.5 * (below0[j] - above0 + parity * total0);
  }
  return out;
}

}  // namespace twophase
