#pragma once

// Small special-function kit used across the library: Gamma (Lanczos),
// surface measures, and the radial Fourier kernel (rho*r)^{-(N-2)/2} J_{(N-2)/2}.

namespace frs {

// Gamma for x > 0, Lanczos approximation (g = 7, 9 coefficients).
double gamma_fn(double x);
double log_gamma_fn(double x);

// |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

// Bessel J_nu for nu = (N-2)/2, N >= 2. Half-integer orders use closed
// forms, integer orders go through GSL.
double bessel_j_halfdim(int N, double z);

// psi(z) = z^{-(N-2)/2} J_{(N-2)/2}(z), the angular average of e^{i x.xi}
// over directions up to a constant; finite at z = 0.
double radial_fourier_kernel(int N, double z);

}  // namespace frs
