#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "frs/fraclap.hpp"
#include "frs/nonlinearity.hpp"
#include "frs/spaces.hpp"

namespace frs {

struct MountainPassConfig {
  std::shared_ptr<const RadialGrid> grid;
  int path_nodes = 32;
  double tol = 1e-6;          // H-norm of the gradient at acceptance
  double coarse_tol = 5e-3;   // hand over to the local refinement below this
  int max_outer = 6000;
  int patience = 500;         // stagnation window on the path-max energy
  int newton_max = 80;
  double collapse_norm = 1e-8;
  bool nonneg = true;         // truncate f below zero, assert output >= 0
  unsigned seed = 1;
  double separation = 5e-2;   // deflation: pairwise H-distance between solutions
  int deflation_budget = 16;  // distinct start profiles to try
};

struct Solution {
  RadialFunction u;
  double energy = 0.0;
  double grad_norm = 0.0;
  double pde_residual = 0.0;       // consistent (DirectIntegral) strong residual
  double pde_residual_cross = 0.0; // spectral-route strong residual
  double pde_residual_cross_rel = 0.0;  // relative to ||K f(u)||
  double nehari_residual = 0.0;    // | ||u||^2 - int K f(u) u | / ||u||^2
  bool nonneg = false;
  bool converged = false;
  int outer_iterations = 0;
  std::vector<std::pair<int, double>> path_history;  // (iteration, max path energy)
};

// Discrete variational context: quadratic part Q + V-mass, its Cholesky
// factor, and the weighted K mass. Shared read-only by solver instances.
class VariationalProblem {
 public:
  VariationalProblem(std::shared_ptr<const RadialGrid> grid, const SpaceParams& p,
                     const PotentialFamily& V, const PotentialFamily& K);

  const RadialGrid& grid() const { return *grid_; }
  std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  const SpaceParams& params() const { return p_; }
  double tail_exponent() const { return tail_exp_; }

  double norm_sq(const Eigen::VectorXd& u) const;       // ||u||^2_{H^s_V}
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double energy(const Eigen::VectorXd& u, const Nonlinearity& f) const;
  Eigen::VectorXd coord_gradient(const Eigen::VectorXd& u, const Nonlinearity& f) const;
  Eigen::VectorXd riesz(const Eigen::VectorXd& coord_grad) const;
  double grad_norm(const Eigen::VectorXd& u, const Nonlinearity& f) const;
  double nehari_residual(const Eigen::VectorXd& u, const Nonlinearity& f) const;
  // Newton step on grad E = 0: solves (G - diag(Kw f'(u)) + damping I) d = -coord_grad
  Eigen::VectorXd newton_step(const Eigen::VectorXd& u, const Nonlinearity& f,
                              double damping = 0.0) const;

  RadialFunction wrap(const Eigen::VectorXd& u) const;
  const PotentialFamily& V() const { return V_; }
  const PotentialFamily& K() const { return K_; }

 private:
  std::shared_ptr<const RadialGrid> grid_;
  SpaceParams p_;
  PotentialFamily V_, K_;
  double tail_exp_;
  Eigen::MatrixXd G_;       // Q + diag(Vw)
  Eigen::VectorXd Kw_;      // |S^{N-1}| w_i K_i
  Eigen::LDLT<Eigen::MatrixXd> G_ldlt_;
};

// ---- operations ----

double energy(const RadialFunction& u, const PotentialFamily& V,
              const PotentialFamily& K, const Nonlinearity& f, const SpaceParams& p);

RadialFunction energy_gradient(const RadialFunction& u, const PotentialFamily& V,
                               const PotentialFamily& K, const Nonlinearity& f,
                               const SpaceParams& p);

// Doubles lambda until E(lambda u0) < -1; requires u0 with |u0| >= t0 on a
// set of positive measure.
std::pair<double, RadialFunction> find_endpoint(const RadialFunction& u0,
                                                const PotentialFamily& V,
                                                const PotentialFamily& K,
                                                const Nonlinearity& f,
                                                const SpaceParams& p);

Solution mountain_pass(const PotentialFamily& V, const PotentialFamily& K,
                       const Nonlinearity& f, const SpaceParams& p,
                       const MountainPassConfig& cfg);

// Finds one more critical point separated from every entry of `found` (and
// their negatives) by cfg.separation in the H-norm; f must be odd.
Solution deflate_and_continue(const std::vector<Solution>& found,
                              const PotentialFamily& V, const PotentialFamily& K,
                              const Nonlinearity& f, const SpaceParams& p,
                              const MountainPassConfig& cfg);

}  // namespace frs
