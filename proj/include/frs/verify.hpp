#pragma once

#include <optional>
#include <vector>

#include "frs/exponents.hpp"
#include "frs/spaces.hpp"

namespace frs {

// Lower-bound estimate of a constrained supremum, with its maximizer.
struct SupremumEstimate {
  double q = 0.0;
  double R = 0.0;
  double value = 0.0;  // certified lower bound on the supremum
  RadialFunction maximizer;
  int iterations = 0;
  bool converged = false;
};

struct AscentConfig {
  int budget = 4000;        // total ascent iterations across starts
  int starts = 4;           // random initial bumps
  double tol = 1e-7;        // tangential gradient norm, relative to the value
  unsigned seed = 1;
  const RadialFunction* warm_start = nullptr;
};

// sup over the unit sphere of H^s_V of int_{B_R} K |u|^q (projected ascent;
// returns the best profile found, a certified lower bound).
SupremumEstimate estimate_S0(double q, double R, const PotentialFamily& V,
                             const PotentialFamily& K, const SpaceParams& p,
                             std::shared_ptr<const RadialGrid> grid,
                             const AscentConfig& cfg = {});

// mirror on the complement of B_R
SupremumEstimate estimate_Sinf(double q, double R, const PotentialFamily& V,
                               const PotentialFamily& K, const SpaceParams& p,
                               std::shared_ptr<const RadialGrid> grid,
                               const AscentConfig& cfg = {});

// Annulus interpolation estimate: picks t in the feasible window and
// qt = 2(1 + s/N - 1/t), evaluates both sides, reports the empirical constant.
struct AnnulusReport {
  double t = 0.0;
  double q_tilde = 0.0;
  double lhs = 0.0;        // int_{B_R \ B_r} K |u|^q
  double rhs_core = 0.0;   // ||K||_{L^t(ann)} (int_ann u^2)^{(qt-1)/2} ||u||^{1+q-qt}
  double empirical_C = 0.0;  // lhs / rhs_core
};
AnnulusReport check_annulus_bound(const RadialFunction& u, double r, double R,
                                  double q, const PotentialFamily& K,
                                  const PotentialFamily& V, const SpaceParams& p);

// Region and envelope data for the weighted bound.
enum class RegionKind { Ball, Complement, Annulus };
struct BoundContext {
  RegionKind region = RegionKind::Ball;
  double r_lo = 0.0;  // Annulus only
  double r_hi = 1.0;  // Ball/Annulus outer radius, Complement inner radius
  double alpha = 0.0;
  double beta = 0.0;   // in [0,1]
  double nu = 0.0;     // pointwise envelope |u| <= m r^{-nu} on the region
  double m = 1.0;
  double Lambda = 0.0;  // sup_region K / (r^alpha V^beta); computed if <= 0
};

struct Lemma41Report {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs / lhs - 1
  double Lambda = 0.0;
  bool holds = false;   // lhs <= rhs (1 + tol)
};

// Evaluates the case-appropriate weighted bound on the region; throws if the
// pointwise envelope fails at a node (message names the node) or q <= max{1,2beta}.
Lemma41Report check_lemma41(const RadialFunction& u, const BoundContext& ctx,
                             double q, const PotentialFamily& V,
                             const PotentialFamily& K, const SpaceParams& p,
                             double tol = 5e-2);

enum class DecayEnd { Zero, Infinity };
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> delta_theoretical;
};
// Least-squares slope of log(value) against log(R); requires >= 3 converged
// estimates at distinct radii.
DecayFit decay_rate_fit(const std::vector<SupremumEstimate>& estimates,
                        DecayEnd end,
                        std::optional<double> delta_theoretical = std::nullopt);

}  // namespace frs
