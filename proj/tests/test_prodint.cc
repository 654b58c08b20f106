#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "twophase/prodint.hh"

using namespace twophase;
using Catch::Approx;
using quad = boost::math::quadrature::gauss_kronrod<double, 61>;

namespace {

cplx quad_cplx(const std::function<cplx(double)>& f, double a, double b) {
  const double re = quad::integrate([&](double t) { return f(t).real(); }, a, b, 10, 1e-14);
  const double im = quad::integrate([&](double t) { return f(t).imag(); }, a, b, 10, 1e-14);
  return {re, im};
}

std::vector<cplx> sample(const std::function<cplx(double)>& f, int n, double h) {
  std::vector<cplx> q(n);
  for (int j = 0; j < n; ++j) q[j] = f(j * h);
  return q;
}

}  // namespace

TEST_CASE("exponential moments", "[prodint]") {
  SECTION("series and recurrence agree at the branch switch") {
    for (double scale : {1.99, 2.01}) {
      const cplx A(scale / 0.1 * 0.6, scale / 0.1 * 0.8);  // |A| h = scale at h = 0.1
      const auto mu = exp_moments(A, 0.1);
      for (int m = 0; m < 6; ++m) {
        const cplx ref = quad_cplx([&](double t) { return std::pow(t, m) * std::exp(-A * t); },
                                   0.0, 0.1);
        REQUIRE(std::abs(mu[m] - ref) < 1e-15 * (1.0 + std::abs(ref)));
      }
    }
  }
  SECTION("random complex decay rates against quadrature") {
    for (cplx A : {cplx(0.3, 0.0), cplx(4.0, 3.0), cplx(120.0, -80.0), cplx(0.0, 0.0)}) {
      const double h = 0.07;
      const auto mu = exp_moments(A, h);
      for (int m = 0; m < 6; ++m) {
        const cplx ref =
            quad_cplx([&](double t) { return std::pow(t, m) * std::exp(-A * t); }, 0.0, h);
        REQUIRE(std::abs(mu[m] - ref) < 1e-14 * (1.0 + std::abs(ref)));
      }
    }
  }
  SECTION("A = 0 gives the polynomial moments") {
    const auto mu = exp_moments(cplx(0.0, 0.0), 0.5);
    for (int m = 0; m < 6; ++m)
      REQUIRE(std::abs(mu[m] - std::pow(0.5, m + 1) / (m + 1)) < 1e-16);
  }
}

TEST_CASE("weighted integrals", "[prodint]") {
  SECTION("decaying exponential against the closed form") {
    const int n = 257;
    const double L = 10.0, h = L / (n - 1);
    const auto q = sample([](double y) { return cplx(std::exp(-y), 0.0); }, n, h);
    const cplx J = exp_weighted_integral(q.data(), n, h, cplx(1.0, 0.0));
    REQUIRE(std::abs(J - cplx((1.0 - std::exp(-20.0)) / 2.0, 0.0)) < 1e-11);
  }
  SECTION("oscillatory data against quadrature") {
    const int n = 257;
    const double L = 8.0, h = L / (n - 1);
    const auto f = [](double y) { return std::exp(-0.3 * y) * cplx(std::cos(2 * y), std::sin(y)); };
    const auto q = sample(f, n, h);
    const cplx A(1.5, -0.8);
    const cplx ref = quad_cplx([&](double y) { return std::exp(-A * y) * f(y); }, 0.0, L);
    REQUIRE(std::abs(exp_weighted_integral(q.data(), n, h, A) - ref) < 1e-10);
  }
  SECTION("sixth-order convergence") {
    const auto f = [](double y) { return cplx(std::exp(-0.5 * y) * std::sin(3 * y), 0.0); };
    const cplx A(2.0, 1.0);
    const double L = 6.0;
    const auto err = [&](int n) {
      const double h = L / (n - 1);
      const auto q = sample(f, n, h);
      const cplx ref = quad_cplx([&](double y) { return std::exp(-A * y) * f(y); }, 0.0, L);
      return std::abs(exp_weighted_integral(q.data(), n, h, A) - ref);
    };
    const double ratio = err(65) / err(129);
    REQUIRE(ratio > 35.0);
    REQUIRE(ratio < 110.0);
  }
}

TEST_CASE("exponential kernel solve", "[prodint]") {
  const int n = 513;
  const double L = 10.0, h = L / (n - 1);
  const auto f = [](double y) { return cplx(std::exp(-sq(y - 2.0)), 0.3 * std::exp(-sq(y - 1.5))); };
  const auto q = sample(f, n, h);

  SECTION("matches direct kernel quadrature, both parities") {
    const cplx A(1.3, 0.7);
    for (double parity : {1.0, -1.0}) {
      const auto sol = exp_kernel_solve(q.data(), n, h, A, parity);
      for (int j : {0, 1, 80, 256, 400}) {
        const double x = j * h;
        // split at the kernel kink so the reference quadrature sees smooth pieces
        const auto piece = [&](double y) { return std::exp(-A * std::abs(x - y)) * f(y); };
        const cplx ref = (quad_cplx(piece, 0.0, x) + quad_cplx(piece, x, L) +
                          parity * quad_cplx(
                                       [&](double y) { return std::exp(-A * (x + y)) * f(y); },
                                       0.0, L)) /
                         (2.0 * A);
        REQUIRE(std::abs(sol.value[j] - ref) < 1e-11);
      }
    }
  }
  SECTION("solves the modal ODE") {
    // (A^2 - d^2/dy^2) u = q away from the ends, checked with a wide stencil
    const cplx A(0.9, 0.4);
    const auto sol = exp_kernel_solve(q.data(), n, h, A, -1.0);
    for (int j : {30, 64, 130}) {
      cplx lap{};
      const double w[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
      for (int k = -3; k <= 3; ++k) lap += w[k + 3] * sol.value[j + k];
      lap /= h * h;
      REQUIRE(std::abs(A * A * sol.value[j] - lap - q[j]) < 1e-8);
    }
  }
  SECTION("derivative output matches the value field") {
    const cplx A(2.0, -1.0);
    const auto sol = exp_kernel_solve(q.data(), n, h, A, 1.0);
    for (int j : {10, 100, 180}) {
      cplx d{};
      const double w[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
      for (int k = -3; k <= 3; ++k) d += w[k + 3] * sol.value[j + k];
      d /= h;
      REQUIRE(std::abs(sol.derivative[j] - d) < 1e-9);
    }
  }
  SECTION("huge decay rates stay finite and local") {
    const cplx A(4000.0, 100.0);
    const auto sol = exp_kernel_solve(q.data(), n, h, A, -1.0);
    for (int j = 0; j < n; ++j) {
      REQUIRE(std::isfinite(std::abs(sol.value[j])));
      // u ~ q / A^2 in the stiff limit
      REQUIRE(std::abs(sol.value[j] - q[j] / (A * A)) < 1e-7);
    }
  }
  SECTION("decay guard") {
    REQUIRE_THROWS_AS(exp_kernel_solve(q.data(), n, h, cplx(0.0, 2.0), 1.0), error);
  }
}

TEST_CASE("absolute kernel solve (harmonic zero mode)", "[prodint]") {
  const int n = 513;
  const double L = 12.0, h = L / (n - 1);

  SECTION("odd manufactured solution") {
    // u = y e^{-y^2} solves -u'' = e^{-y^2}(6y - 4y^3) with odd data
    const auto worst_for = [L](int m) {
      const double hm = L / (m - 1);
      const auto q = sample(
          [](double y) { return cplx(std::exp(-y * y) * (6.0 * y - 4.0 * y * y * y), 0.0); }, m,
          hm);
      const auto sol = absolute_kernel_solve(q.data(), m, hm, -1.0);
      double worst = 0.0;
      for (int j = 0; j < m; ++j)
        worst = std::max(worst, std::abs(sol.value[j] - cplx(j * hm * std::exp(-sq(j * hm)), 0.0)));
      return worst;
    };
    const double e513 = worst_for(513);
    REQUIRE(e513 < 4e-10);  // quintic error for this data's sixth derivative
    REQUIRE(worst_for(257) / e513 > 35.0);

    const auto q = sample(
        [](double y) { return cplx(std::exp(-y * y) * (6.0 * y - 4.0 * y * y * y), 0.0); }, n, h);
    const auto sol = absolute_kernel_solve(q.data(), n, h, -1.0);
    REQUIRE(std::abs(sol.value[0]) == 0.0);  // odd data: trace vanishes identically
  }
  SECTION("derivative is consistent") {
    const auto q = sample(
        [](double y) { return cplx(std::exp(-y * y) * (6.0 * y - 4.0 * y * y * y), 0.0); }, n, h);
    const auto sol = absolute_kernel_solve(q.data(), n, h, -1.0);
    for (int j : {50, 150, 280}) {
      const double y = j * h;
      const double expect = std::exp(-y * y) * (1.0 - 2.0 * y * y);
      REQUIRE(std::abs(sol.derivative[j] - cplx(expect, 0.0)) < 1e-10);
    }
  }
}
