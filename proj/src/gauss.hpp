#pragma once

// Gauss-Legendre panels shared by the quadrature-heavy translation units.

namespace frs::quad {

constexpr double kX16[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kW16[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

template <class F>
double gl16(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += kW16[i] * (f(c + h * kX16[i]) + f(c - h * kX16[i]));
  return s * h;
}

// geometric-panel quadrature on (a, b] clustering toward a_cluster = a
template <class F>
double graded_gl16(F&& f, double a_eps, double b, int panels, double ratio) {
  double hi = b, s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a_eps + (hi - a_eps) / ratio;
    if (p == panels - 1) lo = a_eps;
    s += gl16(f, lo, hi);
    hi = lo;
  }
  return s;
}

}  // namespace frs::quad
