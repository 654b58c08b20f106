#pragma once

/*
 * Symbols of the two-phase multiplier operators.
 *
 * A_pm(xi') = sqrt(rho_pm * lambda + |xi'|^2) on the principal branch
 * (cut along (-inf,0], Re >= 0) and the transmission denominator
 * rho_+ A_- + rho_- A_+.  Everything downstream stands on Re A_pm > 0
 * away from the degenerate mode (lambda, xi') = (0, 0), where the
 * continuous problem is solvable only modulo constants and the solvers
 * declare an explicit gauge instead.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twophase/common.hh"
#include "twophase/fd_weights.hh"

namespace twophase {

/* Membership in the sector {|arg z| < pi - sigma, |z| > lambda0}. */
inline bool sector_check(cplx lam, double sigma, double lambda0) {
  if (!(sigma > 0.0 && sigma < pi / 2))
    throw error("sector_check: sigma outside (0, pi/2)");
  if (!(lambda0 >= 0.0))
    throw error("sector_check: negative sector floor");
  if (lam == cplx(0.0, 0.0)) return false;
  return std::abs(std::arg(lam)) < pi - sigma && std::abs(lam) > lambda0;
}

/* Principal-branch root; the lambda = 0 collapse to |xi'| is made exact
 * rather than routed through the complex sqrt. */
inline cplx symbol_a(double rho, cplx lam, double xi_norm) {
  if (lam == cplx(0.0, 0.0)) return cplx(xi_norm, 0.0);
  return std::sqrt(rho * lam + cplx(xi_norm * xi_norm, 0.0));
}

struct symbol_table {
  std::vector<std::vector<double>> freq_grid;  // tangential frequency vectors
  std::vector<double> xi_norm;
  std::vector<cplx> a_plus;
  std::vector<cplx> a_minus;
  std::vector<cplx> denom;  // rho_+ A_- + rho_- A_+
  cplx lambda{};
  density_pair rho;
  std::optional<std::size_t> gauged_mode;  // declared degenerate entry, if any
};

inline symbol_table eval_symbols(const std::vector<std::vector<double>>& freqs, cplx lam,
                                 const density_pair& rho, bool declare_zero_gauge = false) {
  require_densities(rho);
  symbol_table t;
  t.freq_grid = freqs;
  t.lambda = lam;
  t.rho = rho;
  t.xi_norm.reserve(freqs.size());
  t.a_plus.reserve(freqs.size());
  t.a_minus.reserve(freqs.size());
  t.denom.reserve(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    double n2 = 0.0;
    for (double c : freqs[i]) n2 += c * c;
    const double n = std::sqrt(n2);
    if (lam == cplx(0.0, 0.0) && n == 0.0) {
      if (!declare_zero_gauge) throw error("degenerate mode");
      t.gauged_mode = i;
    }
    const cplx ap = symbol_a(rho.plus, lam, n);
    const cplx am = symbol_a(rho.minus, lam, n);
    t.xi_norm.push_back(n);
    t.a_plus.push_back(ap);
    t.a_minus.push_back(am);
    t.denom.push_back(rho.plus * am + rho.minus * ap);
  }
  return t;
}

/* ---------------------------------------------------------------------- */
/* Numerical verification of the symbol-class bounds:
 * |d^alpha f(xi')| <= C (|lambda|^{1/2} + |xi'|)^{s - |alpha|}
 * for f in {A_+^s, A_-^s, (rho_+ A_- + rho_- A_+)^s, |xi'|^s}.           */

struct bound_entry {
  std::string symbol;
  std::vector<int> alpha;
  double max_ratio = 0.0;          // observed constant over the probed grid
  double max_richardson_gap = 0.0; // relative disagreement between step sizes
};

struct bound_report {
  double s = 1.0;
  int max_order = 0;
  std::vector<bound_entry> entries;

  double ratio(const std::string& symbol, int order) const {
    double r = 0.0;
    for (const auto& e : entries) {
      int o = 0;
      for (int a : e.alpha) o += a;
      if (e.symbol == symbol && o == order) r = std::max(r, e.max_ratio);
    }
    return r;
  }
};

namespace detail {

/* Tensor-product central differencing of f at xi with per-dimension
 * derivative orders alpha, 5-point stencils of spacing h. */
inline cplx central_diff(const std::function<cplx(const std::vector<double>&)>& f,
                         const std::vector<double>& xi, const std::vector<int>& alpha, double h) {
  static const std::vector<int> offsets{-2, -1, 0, 1, 2};
  const std::size_t d = xi.size();
  std::vector<std::vector<double>> w(d);
  for (std::size_t j = 0; j < d; ++j) w[j] = fd_weights_uniform(offsets, h, alpha[j]);

  cplx acc(0.0, 0.0);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> p(d);
  for (;;) {
    double weight = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      weight *= w[j][idx[j]];
      p[j] = xi[j] + offsets[idx[j]] * h;
    }
    if (weight != 0.0) acc += weight * f(p);
    std::size_t j = 0;
    while (j < d && ++idx[j] == offsets.size()) idx[j++] = 0;
    if (j == d) break;
  }
  return acc;
}

inline void enumerate_alphas(std::size_t dim, int max_order, std::vector<std::vector<int>>& out) {
  std::vector<int> a(dim, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j == dim) {
      out.push_back(a);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      a[j] = k;
      rec(j + 1, left - k);
    }
    a[j] = 0;
  };
  rec(0, max_order);
}

}  // namespace detail

inline bound_report verify_symbol_bounds(const symbol_table& table, double s, int max_order,
                                         double step_frac = 1.0 / 64.0) {
  if (max_order < 0 || max_order > 4)
    throw error("verify_symbol_bounds: derivative order must be in [0, 4]");
  bound_report rep;
  rep.s = s;
  rep.max_order = max_order;
  if (table.freq_grid.empty()) return rep;

  const cplx lam = table.lambda;
  const density_pair rho = table.rho;
  const double sqrt_lam = std::sqrt(std::abs(lam));

  const auto norm_of = [](const std::vector<double>& xi) {
    double n2 = 0.0;
    for (double c : xi) n2 += c * c;
    return std::sqrt(n2);
  };
  const std::array<std::pair<std::string, std::function<cplx(const std::vector<double>&)>>, 4>
      symbols{{{"a_plus",
                [&](const std::vector<double>& xi) {
                  return std::pow(symbol_a(rho.plus, lam, norm_of(xi)), s);
                }},
               {"a_minus",
                [&](const std::vector<double>& xi) {
                  return std::pow(symbol_a(rho.minus, lam, norm_of(xi)), s);
                }},
               {"denom",
                [&](const std::vector<double>& xi) {
                  const double n = norm_of(xi);
                  return std::pow(rho.plus * symbol_a(rho.minus, lam, n) +
                                      rho.minus * symbol_a(rho.plus, lam, n),
                                  s);
                }},
               {"xi_norm", [&](const std::vector<double>& xi) {
                  return cplx(std::pow(norm_of(xi), s), 0.0);
                }}}};

  const std::size_t dim = table.freq_grid.front().size();
  std::vector<std::vector<int>> alphas;
  detail::enumerate_alphas(dim, max_order, alphas);

  for (const auto& [name, f] : symbols) {
    for (const auto& alpha : alphas) {
      int order = 0;
      for (int a : alpha) order += a;
      bound_entry entry;
      entry.symbol = name;
      entry.alpha = alpha;
      for (std::size_t i = 0; i < table.freq_grid.size(); ++i) {
        const auto& xi = table.freq_grid[i];
        const double n = norm_of(xi);
        if (n == 0.0) throw error("verify_symbol_bounds: frequencies must exclude xi' = 0");
        const double weight = std::pow(sqrt_lam + n, s - order);

        cplx value;
        double gap = 0.0;
        if (order == 0) {
          value = f(xi);
        } else {
          const double h = step_frac * n;
          if (h == 0.0 || n + 2.0 * h == n) throw error("stencil underflow");
          const cplx coarse = detail::central_diff(f, xi, alpha, h);
          const cplx fine = detail::central_diff(f, xi, alpha, h / 2);
          value = (16.0 * fine - coarse) / 15.0;  // 4th-order Richardson
          gap = std::abs(fine - coarse) / (1.0 + std::abs(value));
        }
        entry.max_ratio = std::max(entry.max_ratio, std::abs(value) / weight);
        entry.max_richardson_gap = std::max(entry.max_richardson_gap, gap);
      }
      rep.entries.push_back(std::move(entry));
    }
  }
  return rep;
}

/* ---------------------------------------------------------------------- */
/* Residue identities: for eps > 0 and A = sqrt(rho lambda + |xi'|^2),
 *
 *   (1/2pi) int e^{-eps|xi|^2} i xi_N e^{i a xi_N} / (rho lambda + |xi|^2) dxi_N
 *     = -(sign a / 2) e^{eps rho lambda} e^{-A|a|},
 *   (1/2pi) int e^{-eps|xi|^2} i xi_N e^{i a xi_N} / |xi|^2 dxi_N
 *     = -(sign a / 2) e^{-|xi'||a|},
 *
 * up to Gaussian tail corrections of order e^{-a^2/(4 eps)}; callers keep
 * a^2/(4 eps) large enough that those sit below the comparison tolerance. */

enum class residue_identity { resolvent, laplace };

struct residue_result {
  cplx numeric{};
  cplx closed{};
  double abs_err = 0.0;
  double quadrature_error = 0.0;
};

inline residue_result residue_check(double xi_norm, double a, double eps, cplx lam, double rho,
                                    residue_identity which = residue_identity::resolvent,
                                    double tol = 1e-10) {
  if (!(eps > 0.0)) throw error("residue_check: eps must be positive");
  if (!(rho > 0.0)) throw error("residue_check: rho must be positive");
  if (!(xi_norm >= 0.0)) throw error("residue_check: negative |xi'|");
  if (which == residue_identity::resolvent && lam.imag() == 0.0 && lam.real() <= 0.0)
    throw error("residue_check: lambda on the branch cut");
  if (which == residue_identity::laplace && xi_norm == 0.0 && a != 0.0)
    throw error("degenerate mode");

  const double n2 = xi_norm * xi_norm;
  const cplx pole = (which == residue_identity::resolvent) ? rho * lam + n2 : cplx(n2, 0.0);

  const auto integrand = [&](double t) -> cplx {
    const double t2 = t * t;
    return (1.0 / (2.0 * pi)) * std::exp(-eps * (n2 + t2)) * cplx(0.0, t) *
           std::exp(cplx(0.0, a * t)) / (pole + t2);
  };

  using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_re = 0.0, err_im = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double re = quad::integrate([&](double t) { return integrand(t).real(); }, -inf, inf, 12,
                                    1e-13, &err_re);
  const double im = quad::integrate([&](double t) { return integrand(t).imag(); }, -inf, inf, 12,
                                    1e-13, &err_im);

  residue_result r;
  r.numeric = cplx(re, im);
  r.quadrature_error = err_re + err_im;
  if (r.quadrature_error > tol) throw error("quadrature not converged");

  const double sgn = (a > 0.0) - (a < 0.0);
  if (a == 0.0) {
    r.closed = cplx(0.0, 0.0);
  } else if (which == residue_identity::resolvent) {
    r.closed = -0.5 * sgn * std::exp(eps * rho * lam) *
               std::exp(-symbol_a(rho, lam, xi_norm) * std::abs(a));
  } else {
    r.closed = cplx(-0.5 * sgn * std::exp(-xi_norm * std::abs(a)), 0.0);
  }
  r.abs_err = std::abs(r.numeric - r.closed);
  return r;
}

}  // namespace twophase
