#include "frs/special.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <stdexcept>

namespace frs {

namespace {
// Lanczos g=7, n=9 (Godfrey coefficients).
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: requires x > 0");
  if (x < 0.5) {
    // reflection, only hit for x in (0, 0.5)
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma_fn: requires x > 0");
  if (x < 0.5) return std::log(M_PI / std::sin(M_PI * x)) - log_gamma_fn(1.0 - x);
  double xm = x - 1.0;
  double a = kLanczos[0];
  double t = xm + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (xm + i);
  return 0.5 * std::log(2.0 * M_PI) + (xm + 0.5) * std::log(t) - t + std::log(a);
}

double sphere_area(int N) {
  if (N < 1) throw std::invalid_argument("sphere_area: N >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * N) / gamma_fn(0.5 * N);
}

double bessel_j_halfdim(int N, double z) {
  if (N < 2) throw std::invalid_argument("bessel_j_halfdim: N >= 2");
  if (N % 2 == 1) {
    // half-integer order: spherical Bessel closed forms
    if (z == 0.0) return 0.0;
    const double pref = std::sqrt(2.0 / (M_PI * z));
    if (N == 3) return pref * std::sin(z);
    if (N == 5) return pref * (std::sin(z) / z - std::cos(z));
    // upward recurrence J_{nu+1} = (2nu/z) J_nu - J_{nu-1}
    double jm = pref * std::sin(z);                    // nu = 1/2
    double jc = pref * (std::sin(z) / z - std::cos(z));  // nu = 3/2
    double nu = 1.5;
    for (int n = 5; n < N; n += 2) {
      double jn = (2.0 * nu / z) * jc - jm;
      jm = jc;
      jc = jn;
      nu += 1.0;
    }
    return jc;
  }
  const int order = (N - 2) / 2;
  if (order == 0) return gsl_sf_bessel_J0(z);
  if (order == 1) return gsl_sf_bessel_J1(z);
  return gsl_sf_bessel_Jn(order, z);
}

double radial_fourier_kernel(int N, double z) {
  const double nu = 0.5 * (N - 2);
  if (z < 1e-6) {
    // J_nu(z) ~ (z/2)^nu / Gamma(nu+1) * (1 - z^2/(4(nu+1)))
    return std::pow(0.5, nu) / gamma_fn(nu + 1.0) * (1.0 - 0.25 * z * z / (nu + 1.0));
  }
  return std::pow(z, -nu) * bessel_j_halfdim(N, z);
}

}  // namespace frs
