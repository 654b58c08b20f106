#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>

#include "twophase/dump.hh"
#include "twophase/field.hh"

using namespace twophase;
using Catch::Approx;

namespace {

two_phase_grid small_grid(int tsize = 64, int npts = 129, double L = 5.0) {
  two_phase_grid g;
  g.dim = 2;
  g.tangential_size = tsize;
  g.tangential_period = 2 * pi;
  g.normal_half_extent = L;
  g.normal_points = npts;
  return g;
}

/* v(x) = sin(x1) e^{-|x2|} sampled on both sides (harmonic per side). */
two_phase_scalar_field harmonic_sample(const two_phase_grid& g) {
  two_phase_scalar_field f(g);
  for (std::size_t t = 0; t < g.tangential_count(); ++t) {
    const double x1 = g.tangential_coord(static_cast<int>(t));
    for (int j = 0; j < g.normal_points; ++j) {
      const double d = g.normal_distance(j);
      f.at(phase_side::plus, t, j) = std::sin(x1) * std::exp(-d);
      f.at(phase_side::minus, t, j) = std::sin(x1) * std::exp(-d);
    }
  }
  return f;
}

double max_abs_diff(const two_phase_scalar_field& a, const two_phase_scalar_field& b) {
  double m = 0.0;
  for (phase_side s : {phase_side::plus, phase_side::minus})
    for (std::size_t i = 0; i < a.values(s).size(); ++i)
      m = std::max(m, std::abs(a.values(s)[i] - b.values(s)[i]));
  return m;
}

}  // namespace

TEST_CASE("grid geometry and frequencies", "[fields]") {
  auto g = small_grid();
  g.validate();
  REQUIRE(g.tangential_spacing() == Approx(2 * pi / 64));
  REQUIRE(g.normal_spacing() == Approx(5.0 / 128));
  REQUIRE(g.normal_coord(phase_side::minus, 4) == Approx(-4 * 5.0 / 128));
  REQUIRE(g.wave_index(0) == 0);
  REQUIRE(g.wave_index(1) == 1);
  REQUIRE(g.wave_index(63) == -1);
  REQUIRE(g.wave_index(32) == -32);
  REQUIRE(g.frequency(3) == Approx(3.0));  // period 2*pi gives integer wavenumbers

  auto bad = g;
  bad.tangential_size = 48;
  REQUIRE_THROWS_AS(bad.validate(), error);
  bad = g;
  bad.dim = 4;
  REQUIRE_THROWS_AS(bad.validate(), error);

  two_phase_grid g3 = g;
  g3.dim = 3;
  g3.tangential_size = 8;
  const auto xi = g3.frequency_vector(8 * 2 + 5);
  REQUIRE(xi.size() == 2);
  REQUIRE(xi[0] == Approx(2.0));
  REQUIRE(xi[1] == Approx(-3.0));
}

TEST_CASE("tangential fft roundtrip", "[fields]") {
  auto g = small_grid(32, 17, 1.0);
  two_phase_scalar_field f(g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (phase_side s : {phase_side::plus, phase_side::minus})
    for (auto& v : f.values(s)) v = cplx(u(rng), u(rng));
  auto w = f.plus_values;
  fft::tangential_forward(g, w);
  fft::tangential_inverse(g, w);
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, std::abs(w[i] - f.plus_values[i]));
  REQUIRE(m < 1e-14);
}

TEST_CASE("extensions", "[fields]") {
  auto g = small_grid(4, 9, 1.0);
  two_phase_scalar_field f(g);
  SECTION("even extension of a constant is the constant") {
    for (auto& v : f.plus_values) v = 1.0;
    const auto e = extend(f, extension_parity::even, phase_side::plus);
    for (const auto& v : e.values) REQUIRE(v == cplx(1.0, 0.0));
  }
  SECTION("odd extension of a constant is the sign") {
    for (auto& v : f.plus_values) v = 1.0;
    const auto e = extend(f, extension_parity::odd, phase_side::plus);
    const int c = g.normal_points - 1;
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < e.line_points(); ++j) {
        const double expect = j < c ? -1.0 : 1.0;
        REQUIRE(e.values[t * e.line_points() + j] == cplx(expect, 0.0));
      }
  }
  SECTION("odd extension of x is x globally, from either side") {
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < g.normal_points; ++j) {
        f.at(phase_side::plus, t, j) = g.normal_distance(j);
        f.at(phase_side::minus, t, j) = g.normal_coord(phase_side::minus, j);
      }
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      const auto e = extend(f, extension_parity::odd, s);
      for (std::size_t t = 0; t < g.tangential_count(); ++t)
        for (int j = 0; j < e.line_points(); ++j) {
          const double x = e.line_coord(j);
          REQUIRE(e.values[t * e.line_points() + j].real() == Approx(x).margin(1e-15));
        }
    }
  }
  SECTION("restriction of the odd extension is the identity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.plus_values) v = cplx(u(rng), u(rng));
    const auto e = extend(f, extension_parity::odd, phase_side::plus);
    const int c = g.normal_points - 1;
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < g.normal_points; ++j)
        REQUIRE(e.values[t * e.line_points() + c + j] == f.at(phase_side::plus, t, j));
  }
}

TEST_CASE("jumps", "[fields]") {
  auto g = small_grid(8, 9, 1.0);
  two_phase_scalar_field f(g);
  SECTION("identical traces cancel") {
    for (phase_side s : {phase_side::plus, phase_side::minus})
      for (auto& v : f.values(s)) v = cplx(0.3, -0.7);
    for (const auto& v : jump(f)) REQUIRE(std::abs(v) == 0.0);
  }
  SECTION("constant traces subtract") {
    for (auto& v : f.plus_values) v = 2.0;
    for (auto& v : f.minus_values) v = 0.5;
    for (const auto& v : jump(f)) REQUIRE(v == cplx(1.5, 0.0));
  }
  SECTION("weighted jump of the manufactured pair vanishes") {
    // v_pm = rho_mp cos(x1) e^{-|x2|} satisfies rho_+ v_+ = rho_- v_- exactly
    const density_pair rho{2.0, 0.5};
    for (std::size_t t = 0; t < g.tangential_count(); ++t) {
      const double x1 = g.tangential_coord(static_cast<int>(t));
      for (int j = 0; j < g.normal_points; ++j) {
        const double d = g.normal_distance(j);
        f.at(phase_side::plus, t, j) = rho.minus * std::cos(x1) * std::exp(-d);
        f.at(phase_side::minus, t, j) = rho.plus * std::cos(x1) * std::exp(-d);
      }
    }
    for (const auto& v : jump_weighted(f, rho)) REQUIRE(std::abs(v) < 1e-15);
  }
  SECTION("jump is linear") {
    two_phase_scalar_field u(g), w(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (phase_side s : {phase_side::plus, phase_side::minus}) {
      for (auto& v : u.values(s)) v = cplx(dist(rng), dist(rng));
      for (auto& v : w.values(s)) v = cplx(dist(rng), dist(rng));
    }
    const cplx a(1.7, -0.3), b(-0.4, 2.2);
    auto combo = u;
    scale(combo, a);
    axpy(combo, b, w);
    const auto ju = jump(u), jw = jump(w), jc = jump(combo);
    for (std::size_t t = 0; t < ju.size(); ++t)
      REQUIRE(std::abs(jc[t] - (a * ju[t] + b * jw[t])) < 1e-14);
  }
}

TEST_CASE("differentiation", "[fields]") {
  SECTION("spectral tangential derivative is exact on band-limited data") {
    auto g = small_grid(64, 17, 1.0);
    two_phase_scalar_field f(g);
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < g.normal_points; ++j) {
        const double x1 = g.tangential_coord(static_cast<int>(t));
        f.at(phase_side::plus, t, j) = std::sin(x1);
        f.at(phase_side::minus, t, j) = std::sin(x1);
      }
    const auto d = differentiate(f, 0);
    double worst = 0.0;
    for (std::size_t t = 0; t < g.tangential_count(); ++t) {
      const double x1 = g.tangential_coord(static_cast<int>(t));
      worst = std::max(worst, std::abs(d.at(phase_side::plus, t, 3) - std::cos(x1)));
    }
    REQUIRE(worst < 1e-13);
  }
  SECTION("normal derivative respects the minus-side orientation") {
    // v(x) = e^{x2} globally: on the minus side samples are e^{-d} but
    // d/dx2 v must still come out as +e^{x2}
    auto g = small_grid(4, 129, 5.0);
    two_phase_scalar_field f(g);
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < g.normal_points; ++j) {
        f.at(phase_side::plus, t, j) = std::exp(g.normal_coord(phase_side::plus, j));
        f.at(phase_side::minus, t, j) = std::exp(g.normal_coord(phase_side::minus, j));
      }
    const auto d = differentiate(f, 1);
    double worst = 0.0;
    for (phase_side s : {phase_side::plus, phase_side::minus})
      for (int j = 0; j < g.normal_points; ++j)
        worst = std::max(worst,
                         std::abs(d.at(s, 0, j) - std::exp(g.normal_coord(s, j))));
    REQUIRE(worst < 2e-7);  // e^{x} grows to e^5; relative accuracy ~ h^6
  }
  SECTION("gradient of a constant vanishes") {
    auto g = small_grid(8, 17, 1.0);
    two_phase_scalar_field f(g);
    for (phase_side s : {phase_side::plus, phase_side::minus})
      for (auto& v : f.values(s)) v = cplx(2.0, -1.0);
    const auto gr = gradient(f);
    for (const auto& c : gr.comp)
      for (phase_side s : {phase_side::plus, phase_side::minus})
        for (const auto& v : c.values(s)) REQUIRE(std::abs(v) < 1e-12);
  }
  SECTION("divergence of gradient of a harmonic sample is zero to 1e-8") {
    auto g = small_grid(64, 129, 5.0);
    const auto f = harmonic_sample(g);
    const auto lap = divergence(gradient(f));
    REQUIRE(l2_norm(lap) < 1e-8);
  }
  SECTION("operator composition consistency") {
    auto g = small_grid(16, 33, 2.0);
    const auto f = harmonic_sample(g);
    const auto a = divergence(gradient(f));
    two_phase_scalar_field b(g);
    for (int dir = 0; dir < g.dim; ++dir)
      axpy(b, 1.0, differentiate(differentiate(f, dir), dir));
    REQUIRE(max_abs_diff(a, b) < 1e-16);
  }
}

TEST_CASE("norms", "[fields]") {
  SECTION("zero field") {
    auto g = small_grid(8, 17, 1.0);
    const auto n = norms(two_phase_scalar_field(g));
    REQUIRE(n.l2 == 0.0);
    REQUIRE(n.h1 == 0.0);
    REQUIRE(n.h2 == 0.0);
  }
  SECTION("constant field matches |c| |Q|^{1/2}") {
    auto g = small_grid(16, 65, 3.0);
    two_phase_scalar_field f(g);
    for (phase_side s : {phase_side::plus, phase_side::minus})
      for (auto& v : f.values(s)) v = cplx(0.0, 2.0);
    const double measure = 2.0 * g.normal_half_extent * g.tangential_period;
    REQUIRE(l2_norm(f) == Approx(2.0 * std::sqrt(measure)).epsilon(1e-12));
  }
  SECTION("exponential profile reproduces the closed-form integral") {
    auto g = small_grid(4, 257, 10.0);
    two_phase_scalar_field f(g);
    for (std::size_t t = 0; t < g.tangential_count(); ++t)
      for (int j = 0; j < g.normal_points; ++j)
        f.at(phase_side::plus, t, j) = std::exp(-g.normal_distance(j));
    const double per_area = sq(l2_norm(f)) / g.tangential_period;
    REQUIRE(per_area == Approx((1.0 - std::exp(-20.0)) / 2.0).margin(1e-3));
  }
  SECTION("resolvent triplet at lambda = 1 matches the h2 combination") {
    auto g = small_grid(16, 65, 5.0);
    const auto f = harmonic_sample(g);
    const auto n = norms(f, cplx(1.0, 0.0));
    REQUIRE(n.resolvent_triplet == Approx(n.h2).epsilon(1e-12));
    const auto n4 = norms(f, cplx(4.0, 0.0));
    REQUIRE(n4.resolvent_triplet > n.resolvent_triplet);
  }
}

TEST_CASE("dump roundtrip", "[fields]") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "twophase_dump_test.bin").string();
  auto g = small_grid(8, 17, 2.5);
  SECTION("scalar") {
    two_phase_scalar_field f(g);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (phase_side s : {phase_side::plus, phase_side::minus})
      for (auto& v : f.values(s)) v = cplx(u(rng), u(rng));
    write_dump_file(path, f);
    const auto back = read_scalar_dump(path);
    REQUIRE(back.grid == g);
    REQUIRE(max_abs_diff(back, f) == 0.0);
  }
  SECTION("vector") {
    two_phase_vector_field f(g);
    for (auto& c : f.comp)
      for (phase_side s : {phase_side::plus, phase_side::minus})
        for (auto& v : c.values(s)) v = cplx(1.25, -0.5);
    write_dump_file(path, f);
    const auto back = read_vector_dump(path);
    REQUIRE(back.comp.size() == 2);
    REQUIRE(max_abs_diff(back.comp[1], f.comp[1]) == 0.0);
  }
  SECTION("corruption is detected") {
    two_phase_scalar_field f(g);
    write_dump_file(path, f);
    auto size = fs::file_size(path);
    fs::resize_file(path, size - 9);
    REQUIRE_THROWS_WITH(read_scalar_dump(path), "dump: truncated payload");

    f.plus_values[3] = cplx(std::nan(""), 0.0);
    REQUIRE_THROWS_WITH(write_dump_file(path, f), "dump: non-finite sample");
  }
  fs::remove(path);
}
