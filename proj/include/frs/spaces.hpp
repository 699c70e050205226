#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "frs/exponents.hpp"
#include "frs/grid.hpp"
#include "frs/potentials.hpp"

namespace frs {

enum class Extrapolation { ZeroBeyond, PowerTail };

// Radial profile u(|x|) sampled on a grid, with a tail model beyond r_M.
struct RadialFunction {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> v;
  Extrapolation extrap = Extrapolation::ZeroBeyond;
  double tail_exponent = 0.0;  // u(r) = u(r_M) (r/r_M)^{tail_exponent}, r > r_M

  static RadialFunction zero(std::shared_ptr<const RadialGrid> g);
  static RadialFunction sample(std::shared_ptr<const RadialGrid> g,
                               const std::function<double(double)>& f);
  double value_at(double r) const;  // nodal (nearest) inside, tail beyond
  double sup_beyond(double R) const;  // sup of |u| over [R, infinity)
  void check_same_grid(const RadialFunction& other) const;
};

void write_radial_function(const std::string& csv_path, const RadialFunction& u,
                           const SpaceParams& p);
RadialFunction read_radial_function(const std::string& csv_path, int expected_N);

// Angular average of |x-y|^{-(N+2s)} over directions, reduced to the ratio
// variable: k(r, rho) = max(r,rho)^{-(N+2s)} kappa(min/max). kappa blows up
// like c0 (1-x)^{-(1+2s)} at x -> 1; the table stores the regularized part.
class AngularKernel {
 public:
  AngularKernel(int N, double s);
  int dim() const { return N_; }
  double order() const { return s_; }
  double kappa(double x) const;              // x in [0, 1)
  double kappa_gap(double y) const;          // kappa(1-y), stable for tiny gaps
  double k(double r, double rho) const;      // symmetric in (r, rho)
  double regularized(double x) const;        // kappa(x) (1-x)^{1+2s}, smooth
  double reg_at_one() const { return c1_; }  // |S^{N-2}| B((N-1)/2,(2s+1)/2)/2

 private:
  double quad_kappa(double x) const;
  int N_;
  double s_;
  double c1_;
  std::vector<double> table_;  // regularized kernel on a log(1-x) lattice
  double z_lo_, z_hi_, dz_;
  bool closed_form_;  // N = 3 has an elementary kappa
};

// Assembled quadratic form of the Gagliardo seminorm on a geometric grid:
// [u]^2 = u^T Q u, with near-diagonal segments integrated against the exact
// kernel with quadratically interpolated u, far cells integrated exactly in
// the kernel via lag tables, constant extension below r_1, and the tail
// model beyond r_M (ghost lattice) for PowerTail.
class NonlocalForm {
 public:
  NonlocalForm(std::shared_ptr<const RadialGrid> grid, const SpaceParams& p,
               Extrapolation mode, double tail_exponent = 0.0);

  double seminorm_sq(const std::vector<double>& u) const;
  const Eigen::MatrixXd& matrix() const { return Q_; }
  const RadialGrid& grid() const { return *grid_; }
  const SpaceParams& params() const { return p_; }
  Extrapolation mode() const { return mode_; }
  double tail_exponent() const { return tail_exp_; }

  // strong-form action (mass-lumped): (Au)_i = (Qu)_i / (|S^{N-1}| w_i)
  std::vector<double> apply_strong(const std::vector<double>& u) const;

  // smooth per-node measure consistent with the assembled rows; linear
  // functionals built with these weights pair exactly with apply_strong
  const std::vector<double>& row_weights() const { return row_w_; }

 private:
  std::shared_ptr<const RadialGrid> grid_;
  SpaceParams p_;
  Extrapolation mode_;
  double tail_exp_;
  Eigen::MatrixXd Q_;
  std::vector<double> row_w_;  // smooth row measure used by apply_strong
};

// Shared, cached discretization context. Forms are expensive to assemble;
// everything here is immutable after construction and safe to share.
const NonlocalForm& nonlocal_form(const std::shared_ptr<const RadialGrid>& grid,
                                  const SpaceParams& p, Extrapolation mode,
                                  double tail_exponent = 0.0);
const NonlocalForm& nonlocal_form_for(const RadialFunction& u, const SpaceParams& p);

// ---- norms ----

double gagliardo_seminorm(const RadialFunction& u, const SpaceParams& p);

// As above, but certifies the requested relative accuracy by comparing with
// the half-resolution form (Richardson estimate); throws a numeric error
// naming the estimated defect when the grid is too coarse for the profile.
double gagliardo_seminorm(const RadialFunction& u, const SpaceParams& p,
                          double rel_tol);
double hsv_norm(const RadialFunction& u, const PotentialFamily& V,
                const SpaceParams& p);
double lqk_norm(const RadialFunction& u, const PotentialFamily& K, double q);
double lq_norm(const RadialFunction& u, double q, int N);  // unweighted

struct SumSpaceNorm {
  double value = 0.0;
  double split_radius = 0.0;  // ball/complement decomposition radius used
  bool upper_bound = true;    // restricted to radius splittings
};
SumSpaceNorm sum_space_norm(const RadialFunction& u, const PotentialFamily& K,
                            double q1, double q2);

struct StraussReport {
  double c_emp = 0.0;        // sup |u| r^{(N-2s)/2} / ([u]^theta ||u||_{2*}^{1-theta})
  double c_hsv = 0.0;        // sup |u| r^{(N-2s)/2} / ||u||_{H^s_V}
  double argmax_radius = 0.0;
  double gagliardo = 0.0;
  double crit_norm = 0.0;
  double hsv = 0.0;
};
StraussReport strauss_check(const RadialFunction& u, const PotentialFamily& V,
                            const SpaceParams& p);

}  // namespace frs
