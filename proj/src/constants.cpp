#include "frs/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "frs/special.hpp"

namespace frs {

namespace {

// 16-point Gauss-Legendre on [-1,1]
constexpr double kGLx[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

template <class F>
double gl16(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    s += kGLw[i] * (f(c + h * kGLx[i]) + f(c - h * kGLx[i]));
  return s * h;
}

// spherical average of cos(rho w_1): (2 pi)^{N/2} rho^{-(N-2)/2} J_{(N-2)/2}(rho)
double cos_average(int N, double rho) {
  return std::pow(2.0 * M_PI, 0.5 * N) * radial_fourier_kernel(N, rho);
}

// moment \int_{S^{N-1}} w_1^{2k} dsigma
double sphere_moment(int N, int k) {
  return sphere_area(N) * gamma_fn(k + 0.5) * gamma_fn(0.5 * N) /
         (gamma_fn(0.5) * gamma_fn(k + 0.5 * N));
}

}  // namespace

NormConstant normalization_constant(int N, double s, int refine) {
  if (N < 2) throw std::invalid_argument("normalization_constant: N >= 2");
  if (!(s > 0.5 && s < 1.0))
    throw std::invalid_argument("normalization_constant: s in (1/2, 1)");
  const double area = sphere_area(N);

  // [0, 1]: alternating series of sphere moments
  double head = 0.0;
  {
    double fact = 2.0;  // (2k)!
    for (int k = 1; k <= 18; ++k) {
      const double term = sphere_moment(N, k) / (fact * (2.0 * k - 2.0 * s));
      head += (k % 2 == 1) ? term : -term;
      fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
  }

  // [1, P0]: smooth oscillatory part, panels per half period
  const double P0 = 40.0;
  double mid = 0.0;
  {
    const int panels = static_cast<int>(std::ceil((P0 - 1.0) / M_PI)) * 2 * refine;
    const double step = (P0 - 1.0) / panels;
    for (int p = 0; p < panels; ++p) {
      mid += gl16(
          [&](double rho) {
            return std::pow(rho, -1.0 - 2.0 * s) * (area - cos_average(N, rho));
          },
          1.0 + p * step, 1.0 + (p + 1) * step);
    }
  }

  // [P0, inf): area piece analytic, Bessel piece chunked per half period
  double tail = area * std::pow(P0, -2.0 * s) / (2.0 * s);
  const double X = 4000.0;
  {
    const int chunks = static_cast<int>(std::ceil((X - P0) / M_PI));
    const double step = (X - P0) / chunks;
    double osc = 0.0;
    for (int p = 0; p < chunks; ++p) {
      osc += gl16(
          [&](double rho) {
            return std::pow(rho, -1.0 - 2.0 * s) * cos_average(N, rho);
          },
          P0 + p * step, P0 + (p + 1) * step);
    }
    tail -= osc;
  }
  // |cos_average| <= (2 pi)^{N/2} sqrt(2/pi) rho^{-(N-1)/2}; one integration
  // by parts of the oscillation adds another 1/X
  const double tail_bound = std::pow(2.0 * M_PI, 0.5 * N) * std::sqrt(2.0 / M_PI) *
                            std::pow(X, -0.5 * (N - 1) - 1.0 - 2.0 * s) * 2.0;

  const double I = head + mid + tail;
  if (!(I > 0.0)) throw std::runtime_error("normalization_constant: quadrature failed");
  if (tail_bound > 1e-7 * I)
    throw std::runtime_error(
        "normalization_constant: oscillatory tail estimate exceeds tolerance");
  return NormConstant{1.0 / I, I, tail_bound};
}

double paper_closed_form_C(int N, double s) {
  return std::pow(2.0, -(N + 2.0 * s) / 2.0 + 1.0) * std::pow(M_PI, -0.5 * N) *
         std::pow(2.0, 2.0 * s) * s * (1.0 - s) / gamma_fn(2.0 - s);
}

double sobolev_constant(int N, double s) {
  if (N < 2 || !(s > 0.0 && s < 1.0) || !(N > 2.0 * s))
    throw std::invalid_argument("sobolev_constant: need N >= 2, s in (0,1), N > 2s");
  const double two_star = 2.0 * N / (N - 2.0 * s);
  const double inner = 1.0 / (std::pow(2.0, 2.0 * s) * std::pow(M_PI, s)) *
                       gamma_fn(0.5 * (N - 2.0 * s)) / gamma_fn(0.5 * (N + 2.0 * s)) *
                       std::pow(gamma_fn(double(N)) / gamma_fn(0.5 * N), 2.0 * s / N);
  return std::pow(inner, 0.5 * two_star);
}

double sobolev_linear_constant(int N, double s) {
  const double two_star = 2.0 * N / (N - 2.0 * s);
  return std::pow(sobolev_constant(N, s), 1.0 / two_star);
}

}  // namespace frs
