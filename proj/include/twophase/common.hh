#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace twophase {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/* Every contract violation in the library throws this; what() carries the
 * short diagnostic string the CLI prints on exit codes 1..3. */
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }
inline cplx sq(cplx z) { return z * z; }

struct density_pair {
  double plus = 1.0;
  double minus = 1.0;

  double of(bool plus_side) const { return plus_side ? plus : minus; }
};

inline void require_densities(const density_pair& rho) {
  if (!(rho.plus > 0.0) || !(rho.minus > 0.0))
    throw error("density_pair: densities must be strictly positive");
}

}  // namespace twophase
