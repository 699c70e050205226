#include "frs/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "frs/constants.hpp"

namespace frs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

void require_params(const SpaceParams& p) {
  if (p.N < 2 || !(p.s > 0.5 && p.s < 1.0))
    throw std::invalid_argument("SpaceParams: need N >= 2 and s in (1/2, 1)");
}

void require_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in [0, 1]");
}
}  // namespace

SpaceParams make_space_params(int N, double s) {
  if (N < 2 || !(s > 0.5 && s < 1.0))
    throw std::invalid_argument("make_space_params: need N >= 2 and s in (1/2, 1)");
  SpaceParams p;
  p.N = N;
  p.s = s;
  p.two_star = 2.0 * N / (N - 2.0 * s);
  p.theta = (N - 2.0 * s) / (2.0 * s * N - 2.0 * s);
  p.sobolev_S = sobolev_constant(N, s);
  p.norm_C = normalization_constant(N, s).C;
  return p;
}

double alpha_star(double beta, const SpaceParams& p) {
  require_params(p);
  require_beta(beta);
  if (beta <= 0.5) return -0.5 * p.N - (1.0 - 2.0 * beta) * p.s;
  return -(1.0 - beta) * p.N;
}

double q_star(double alpha, double beta, const SpaceParams& p) {
  require_params(p);
  require_beta(beta);
  return 2.0 * (alpha - 2.0 * p.s * beta + p.N) / (p.N - 2.0 * p.s);
}

double delta_zero(double q1, const WeightExponents& we, const SpaceParams& p) {
  require_params(p);
  require_beta(we.beta0);
  const double qs = q_star(we.alpha0, we.beta0, p);
  const double lo = std::max(1.0, 2.0 * we.beta0);
  if (!(q1 > lo && q1 < qs))
    throw std::invalid_argument("delta_zero: q1 outside (max{1,2*beta0}, q*)");
  const double N = p.N, s = p.s;
  double factor;
  if (we.beta0 <= 0.5)
    factor = (N - 2.0 * s) / (N + 2.0 * s * (1.0 - 2.0 * we.beta0));
  else if (we.beta0 < 1.0)
    factor = (N - 2.0 * s) / (2.0 * (1.0 - we.beta0));
  else
    factor = 0.5 * (N - 2.0 * s);
  return factor * (qs - q1);
}

double delta_inf(double q2, const WeightExponents& we, const SpaceParams& p) {
  require_params(p);
  require_beta(we.beta_inf);
  const double qs = q_star(we.alpha_inf, we.beta_inf, p);
  const double lo = std::max({1.0, 2.0 * we.beta_inf, qs});
  if (!(q2 > lo))
    throw std::invalid_argument("delta_inf: q2 must exceed max{1, 2*beta_inf, q*}");
  const double N = p.N, s = p.s;
  double factor;
  if (we.beta_inf <= 0.5)
    factor = N * (N - 2.0 * s) / (N + 2.0 * s * (1.0 - 2.0 * we.beta_inf));
  else if (we.beta_inf < 1.0)
    factor = (N - 2.0 * s) / (2.0 * (1.0 - we.beta_inf));
  else
    factor = 0.5 * (N - 2.0 * s);
  return factor * (qs - q2);
}

namespace {

// fill single-space data from a report's q1 interval and reported q2 lower bound
void finish_report(EmbeddingReport& rep, const WeightExponents& we,
                   const SpaceParams& p) {
  rep.exponents = we;
  if (!rep.q1_interval.empty) {
    const double lo = std::max(rep.q1_interval.lo, rep.q2_lower);
    if (rep.q1_interval.hi > lo + kSlack) {
      rep.single_space = true;
      rep.q_single_interval = OpenInterval{lo, rep.q1_interval.hi, false};
    }
  }
  // representative exponents for the report
  if (!rep.q1_interval.empty) {
    const double lo = rep.q1_interval.lo, hi = rep.q1_interval.hi;
    rep.q1_used = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 1.0;
    if (std::isfinite(hi)) {
      WeightExponents w0 = we;
      rep.delta0 = delta_zero(rep.q1_used, w0, p);
    }
  }
  rep.q2_used = rep.q2_lower_strict + 1.0;
  const double qsi = q_star(we.alpha_inf, we.beta_inf, p);
  if (std::isfinite(qsi)) rep.delta_inf = delta_inf(rep.q2_used, we, p);
}

}  // namespace

EmbeddingReport admissible_ranges(const WeightExponents& we, const SpaceParams& p) {
  require_params(p);
  require_beta(we.beta0);
  require_beta(we.beta_inf);
  EmbeddingReport rep;
  const double q1_lo = std::max(1.0, 2.0 * we.beta0);
  const double q1_hi = q_star(we.alpha0, we.beta0, p);
  if (we.alpha0 > alpha_star(we.beta0, p) + kSlack && q1_hi > q1_lo + kSlack)
    rep.q1_interval = OpenInterval{q1_lo, q1_hi, false};
  rep.q2_lower_strict =
      std::max({1.0, 2.0 * we.beta_inf, q_star(we.alpha_inf, we.beta_inf, p)});
  rep.q2_lower = rep.q2_lower_strict;
  finish_report(rep, we, p);
  return rep;
}

EmbeddingReport classify_potentials(const PotentialFamily& family,
                                    const SpaceParams& p) {
  require_params(p);
  const double N = p.N, s = p.s;

  if (auto* pw = family.as<PowerPotentials>()) {
    if (!(pw->b > -0.5 * N - s))
      throw std::invalid_argument("power potentials require b > -N/2 - s");
    WeightExponents we;
    we.alpha0 = pw->b;
    we.beta0 = 0.0;
    we.alpha_inf = pw->b - pw->a;
    we.beta_inf = 1.0;
    EmbeddingReport rep = admissible_ranges(we, p);
    // the model range published for this family drops the 2*beta_inf clamp
    rep.q2_lower = std::max(1.0, q_star(we.alpha_inf, we.beta_inf, p));
    rep.single_space = false;
    rep.q_single_interval.reset();
    finish_report(rep, we, p);
    rep.note = pw->a > -2.0 * s ? "single weighted Lebesgue space available"
                                : "sum-space range only (a <= -2s)";
    return rep;
  }

  if (auto* zv = family.as<ZeroVPotentials>()) {
    WeightExponents we;
    we.alpha0 = zv->alpha0;
    we.beta0 = 0.0;
    we.alpha_inf = zv->alpha_inf;
    we.beta_inf = 0.0;
    EmbeddingReport rep = admissible_ranges(we, p);
    rep.note = "V = 0: envelope exponents supplied by caller";
    return rep;
  }

  if (auto* ex = family.as<ExponentialPotentials>()) {
    WeightExponents we;
    we.alpha0 = 0.0;  // any exponential factor is bounded near 0
    we.beta0 = 0.0;
    EmbeddingReport rep;
    if (ex->cK <= 0.0) {
      // K decays (or is constant): beta_inf = 0 with alpha_inf arbitrarily
      // negative kills the threshold
      we.beta_inf = 0.0;
      we.alpha_inf = ex->cK < 0.0 ? -kInf : 0.0;
      if (ex->cK < 0.0) {
        rep = admissible_ranges(WeightExponents{we.alpha0, we.beta0, -N - 2.0, 0.0},
                                p);
        rep.q2_lower = rep.q2_lower_strict = 1.0;
        rep.exponents.alpha_inf = -kInf;
        finish_report(rep, rep.exponents, p);
        rep.note = "K decays exponentially: any power envelope at infinity";
        return rep;
      }
      // cK = 0: K constant, envelope alpha_inf = 0
      we.alpha_inf = 0.0;
      if (ex->cV > 0.0) we.beta_inf = 0.0;  // V grows, beta 0 is already finite
      rep = admissible_ranges(we, p);
      rep.note = "constant K";
      return rep;
    }
    if (ex->cV <= 0.0 || ex->cK > ex->cV) {
      // no envelope with finite sup at infinity
      we.beta_inf = 1.0;
      we.alpha_inf = kInf;
      rep.q1_interval = OpenInterval{1.0, p.two_star, false};
      rep.q2_lower = rep.q2_lower_strict = kInf;
      rep.exponents = we;
      rep.q1_used = 0.5 * (1.0 + p.two_star);
      rep.delta0 = delta_zero(rep.q1_used, we, p);
      rep.note = "no finite envelope at infinity: exterior suprema unverified";
      return rep;
    }
    // candidates: beta = cK/cV with alpha = 0, or beta = 1 with alpha <= 0
    const double beta_eq = ex->cK / ex->cV;
    const double thr_eq = std::max({1.0, 2.0 * beta_eq, q_star(0.0, beta_eq, p)});
    WeightExponents we_eq{0.0, 0.0, 0.0, beta_eq, 1.0, 1.0};
    if (beta_eq < 1.0) {
      const double thr_one = std::max({1.0, 2.0, q_star(0.0, 1.0, p)});
      if (thr_one < thr_eq) {
        WeightExponents we1{0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
        rep = admissible_ranges(we1, p);
        rep.note = "envelope (alpha_inf=0, beta_inf=1) at infinity";
        return rep;
      }
    }
    rep = admissible_ranges(we_eq, p);
    rep.note = "envelope (alpha_inf=0, beta_inf=cK/cV) at infinity";
    return rep;
  }

  if (auto* mx = family.as<MixedPotentials>()) {
    // published model range: exponential decay of K beats every power, the
    // small-ball envelope is taken unbounded and the exterior one at -N
    WeightExponents we;
    we.alpha0 = kInf;
    we.beta0 = 0.0;
    we.alpha_inf = -double(N);
    we.beta_inf = 0.0;
    EmbeddingReport rep;
    rep.exponents = we;
    rep.q1_interval = OpenInterval{1.0, kInf, false};
    rep.q2_lower = rep.q2_lower_strict =
        std::max({1.0, 0.0, q_star(we.alpha_inf, 0.0, p)});
    rep.single_space = true;
    rep.q_single_interval = OpenInterval{1.0, kInf, false};
    rep.q1_used = 2.0;
    rep.q2_used = rep.q2_lower + 1.0;
    rep.delta_inf = delta_inf(rep.q2_used, we, p);
    // the cap the small-ball envelope actually supports for this K
    const double cap = q_star(mx->d, 0.0, p);
    rep.note = "compact for every q > 1 (model range; envelope-backed small-ball cap q* = " +
               std::to_string(cap) + ")";
    return rep;
  }

  // tabulated: classify the envelope numerically from the table
  auto* tb = family.as<TabulatedPotentials>();
  const auto& rs = tb->grid->nodes();
  auto envelope_exponent = [&](bool at_zero) {
    // log-log slope of K over the first/last decade of the table
    const int M = static_cast<int>(rs.size());
    int i0 = at_zero ? 0 : M - 1 - M / 8;
    int i1 = at_zero ? M / 8 : M - 1;
    const double num = std::log(tb->K[i1] / tb->K[i0]);
    const double den = std::log(rs[i1] / rs[i0]);
    return num / den;
  };
  WeightExponents we;
  we.beta0 = 0.0;
  we.beta_inf = 0.0;
  we.alpha0 = envelope_exponent(true);
  we.alpha_inf = envelope_exponent(false);
  EmbeddingReport rep = admissible_ranges(we, p);
  rep.note = "tabulated: envelope exponents fitted from table ends";
  return rep;
}

}  // namespace frs
