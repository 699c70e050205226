#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "frs/nonlinearity.hpp"
#include "frs/spaces.hpp"

namespace frs {

enum class FracLapMode { Spectral, DirectIntegral };

// Frequency lattice for the spectral (radial Fourier multiplier) route.
// In three dimensions the transform runs through a uniform sine lattice
// (xi_hi doubles as the domain length, M_xi as the lattice size).
struct SpectralConfig {
  double xi_lo = 0.0;  // 0: derived from the grid (0.05 / r_M)
  double xi_hi = 0.0;  // 0: derived from the grid
  int M_xi = 0;        // 0: backend default
};

// Discrete (-Delta)^s acting on radial profiles. Spectral mode multiplies by
// |xi|^{2s} between forward/backward radial transforms; DirectIntegral mode
// is the principal-value quadrature behind the Gagliardo form.
class FracLapOperator {
 public:
  FracLapOperator(std::shared_ptr<const RadialGrid> grid, const SpaceParams& p,
                  FracLapMode mode, Extrapolation extrap = Extrapolation::ZeroBeyond,
                  double tail_exponent = 0.0, SpectralConfig spectral = {});

  RadialFunction apply(const RadialFunction& u) const;

  // quadratic form <apply(u), u>_{L^2}; equals the Gagliardo square exactly in
  // DirectIntegral mode and up to transform error in Spectral mode
  double quadratic_form(const RadialFunction& u) const;

  // dense strong-form action matrix (rows scaled by the quadrature measure)
  Eigen::MatrixXd action_matrix() const;

  // row-major float64 with an 8-byte header (uint32 M, float32 s)
  void export_binary(const std::string& path) const;

  FracLapMode mode() const { return mode_; }
  const SpaceParams& params() const { return p_; }
  const RadialGrid& grid() const { return *grid_; }
  const std::vector<double>& multiplier() const { return mult_; }  // spectral

 private:
  std::shared_ptr<const RadialGrid> grid_;
  SpaceParams p_;
  FracLapMode mode_;
  Extrapolation extrap_;
  double tail_exp_;
  // spectral tables (log-frequency lattice backend)
  std::shared_ptr<const RadialGrid> xi_;
  Eigen::MatrixXd psi_;        // psi(xi_k r_i)
  std::vector<double> mult_;   // xi^{2s}
  // sine backend (N = 3)
  double sine_L_ = 0.0;
  int sine_n_ = 0;
};

// Weighted-L2 norm of (-Delta)^s u + V u - K f(u) over the grid.
double pde_residual(const RadialFunction& u, const PotentialFamily& V,
                    const PotentialFamily& K, const Nonlinearity& f,
                    const SpaceParams& p, FracLapMode mode = FracLapMode::Spectral);

struct ResidualReport {
  double absolute = 0.0;
  double relative = 0.0;  // absolute / ||K f(u)||_{weighted L2}
};
ResidualReport pde_residual_report(const RadialFunction& u, const PotentialFamily& V,
                                   const PotentialFamily& K, const Nonlinearity& f,
                                   const SpaceParams& p,
                                   FracLapMode mode = FracLapMode::Spectral);

}  // namespace frs
