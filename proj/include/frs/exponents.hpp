#pragma once

#include <optional>
#include <string>

#include "frs/potentials.hpp"

namespace frs {

// Ambient space data: dimension, fractional order, derived constants.
struct SpaceParams {
  int N;             // >= 2
  double s;          // in (1/2, 1)
  double two_star;   // 2N/(N-2s)
  double theta;      // (N-2s)/(2sN-2s), Strauss interpolation exponent
  double sobolev_S;  // Gamma-formula Sobolev constant (2*_s-power form)
  double norm_C;     // normalization constant from the integral definition
};

SpaceParams make_space_params(int N, double s);

// Weight envelope exponents near zero and infinity.
struct WeightExponents {
  double alpha0 = 0.0;
  double beta0 = 0.0;  // in [0,1]
  double alpha_inf = 0.0;
  double beta_inf = 0.0;  // in [0,1]
  double R1 = 1.0;         // > 0
  double R2 = 1.0;         // > 0
};

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
  bool empty = true;
};

struct EmbeddingReport {
  OpenInterval q1_interval;
  double q2_lower = 0.0;          // embedding holds for q2 > this (as reported)
  double q2_lower_strict = 0.0;  // max{1, 2*beta_inf, q*}; may exceed q2_lower
                                  // when a published model range is reproduced
  bool single_space = false;
  std::optional<OpenInterval> q_single_interval;
  std::optional<double> delta0;     // at q1_used, > 0
  std::optional<double> delta_inf;  // at q2_used, < 0
  double q1_used = 0.0;
  double q2_used = 0.0;
  WeightExponents exponents;
  std::string note;
};

// alpha*_s(beta): threshold envelope exponent. Both branches give -N/2 at 1/2.
double alpha_star(double beta, const SpaceParams& p);

// q*(alpha, beta, s) = 2 (alpha - 2 s beta + N) / (N - 2s);
// increasing in alpha, decreasing in beta.
double q_star(double alpha, double beta, const SpaceParams& p);

// Decay rate of the small-ball suprema: S0(q1, R) <= C R^{delta0}, delta0 > 0.
double delta_zero(double q1, const WeightExponents& we, const SpaceParams& p);

// Decay rate of the exterior suprema: Sinf(q2, R) <= C R^{delta_inf}, < 0.
double delta_inf(double q2, const WeightExponents& we, const SpaceParams& p);

// Admissible (q1, q2) ranges for the given envelopes. Empty q1 interval is a
// value (hit when alpha0 <= alpha*_s(beta0)), not an error.
EmbeddingReport admissible_ranges(const WeightExponents& we, const SpaceParams& p);

// Picks the model-optimal envelope exponents per family and delegates.
// Power family with b <= -N/2 - s is a domain error.
EmbeddingReport classify_potentials(const PotentialFamily& family, const SpaceParams& p);

}  // namespace frs
