#pragma once

namespace frs {

// C(N,s) from its defining integral, C = ( \int (1-cos z_1)/|z|^{N+2s} dz )^{-1}.
// Reduction: radial integral of rho^{-1-2s} A(rho) where A is the spherical
// average of 1-cos(rho w_1); series below rho=1, Gauss panels in the middle,
// analytic + oscillation-resolved tail. Relative accuracy ~1e-9.
struct NormConstant {
  double C;         // the constant itself
  double integral;  // the defining integral (1/C)
  double tail_bound;  // bound on the neglected oscillatory remainder
};
NormConstant normalization_constant(int N, double s, int refine = 1);

// The closed form printed next to the definition; kept only so its deviation
// from the integral value can be reported, never used in computations.
double paper_closed_form_C(int N, double s);

// Sobolev constant of the critical embedding, evaluated from the Gamma
// formula; the exponent 2*_s/2 makes it the constant of the 2*_s-power form
//   ||u||_{2*_s}^{2*_s} <= S [u]^{2*_s}.
double sobolev_constant(int N, double s);

// Constant of the linear form ||u||_{2*_s} <= S_lin [u]; equals S^{1/2*_s}.
double sobolev_linear_constant(int N, double s);

}  // namespace frs
