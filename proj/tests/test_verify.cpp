#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "frs/special.hpp"
#include "frs/verify.hpp"
#include "test_support.hpp"

using namespace frs;

namespace {
std::shared_ptr<const RadialGrid> desk_grid() {
  return RadialGrid::log_grid(3, 1e-3, 50.0, 512);
}
}

TEST_CASE("small-ball estimates: trivial bounds and scaling in K") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  const auto VK = PotentialFamily::constants(1.0, 1.0);
  AscentConfig ac;
  ac.budget = 1200;
  // with V = 1 and q = 2 the objective is dominated by the norm
  const SupremumEstimate e = estimate_S0(2.0, 40.0, VK, VK, p, g, ac);
  CHECK(e.value <= 1.0 + 1e-9);
  CHECK(e.value > 0.5);  // most of the mass fits inside such a large ball
  // the objective is linear in K
  const auto Ktiny = PotentialFamily::constants(1.0, 1e-12);
  const SupremumEstimate et = estimate_S0(2.0, 40.0, VK, Ktiny, p, g, ac);
  CHECK(et.value <= 1e-12 * (1.0 + 1e-9));
  // maximizer sits on the unit sphere of the weighted space
  CHECK(hsv_norm(e.maximizer, VK, p) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("estimate value equals the regional integral of its maximizer") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  const auto V = PotentialFamily::exponential(2.0, 1.0);
  AscentConfig ac;
  ac.budget = 1500;
  const SupremumEstimate e = estimate_Sinf(2.5, 3.0, V, V, p, g, ac);
  double J = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    const double r = g->node(i);
    if (r <= 3.0) continue;
    J += g->weight(i) * V.K_at(r) * std::pow(std::abs(e.maximizer.v[i]), 2.5);
  }
  J *= sphere_area(3);
  CHECK(e.value == doctest::Approx(J).epsilon(1e-10));
}

TEST_CASE("warm-started chains are literally monotone") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  const auto VK = PotentialFamily::constants(1.0, 1.0);
  AscentConfig ac;
  ac.budget = 1600;
  std::vector<SupremumEstimate> chain;
  for (double R : {0.1, 0.2, 0.4}) {
    AscentConfig a2 = ac;
    a2.warm_start = chain.empty() ? nullptr : &chain.back().maximizer;
    chain.push_back(estimate_S0(3.0, R, VK, VK, p, g, a2));
  }
  CHECK(chain[1].value >= chain[0].value * (1.0 - 1e-3));
  CHECK(chain[2].value >= chain[1].value * (1.0 - 1e-3));
  // the exterior mirror is nonincreasing
  const auto V = PotentialFamily::exponential(2.0, 1.0);
  std::vector<SupremumEstimate> down;
  for (double R : {8.0, 4.0, 2.0}) {
    AscentConfig a2 = ac;
    a2.warm_start = down.empty() ? nullptr : &down.back().maximizer;
    down.push_back(estimate_Sinf(2.5, R, V, V, p, g, a2));
  }
  CHECK(down[1].value >= down[0].value * (1.0 - 1e-3));
  CHECK(down[2].value >= down[1].value * (1.0 - 1e-3));
  // maximizers obey the pointwise decay bound with the family constant
  for (const auto& e : chain) {
    const StraussReport sr = strauss_check(e.maximizer, VK, p);
    const double nu = 0.5 * (p.N - 2.0 * p.s);
    for (int i = 0; i < g->size(); ++i)
      CHECK(std::abs(e.maximizer.v[i]) <=
            sr.c_emp * std::pow(gagliardo_seminorm(e.maximizer, p), p.theta) *
                std::pow(lq_norm(e.maximizer, p.two_star, 3), 1.0 - p.theta) *
                std::pow(g->node(i), -nu) * (1.0 + 1e-9));
  }
}

TEST_CASE("decay fit: exact power law, refusal paths") {
  auto g = RadialGrid::log_grid(3, 1e-2, 10.0, 32);
  std::vector<SupremumEstimate> synth;
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    SupremumEstimate e;
    e.q = 2.0;
    e.R = R;
    e.value = R;  // slope exactly one
    e.converged = true;
    e.maximizer = RadialFunction::zero(g);
    synth.push_back(e);
  }
  const DecayFit fit = decay_rate_fit(synth, DecayEnd::Zero);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
  synth.resize(2);
  CHECK_THROWS_AS(decay_rate_fit(synth, DecayEnd::Zero), std::invalid_argument);
  synth.resize(4);
  for (double R : {0.5, 1.0}) {
    SupremumEstimate e;
    e.R = R;
    e.value = R;
    e.converged = false;
    synth.push_back(e);
  }
  CHECK_THROWS_AS(decay_rate_fit(synth, DecayEnd::Zero), std::invalid_argument);
}

TEST_CASE("annulus bound: window, empirical constant, stability") {
  const SpaceParams p = make_space_params(3, 0.75);
  // (2*_s)' = 4/3 for these parameters; for q = 3 the window is unbounded
  auto bump = [](double r) {
    const double x = (r - 2.0) / 1.0;
    return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, 5.0) : 0.0;
  };
  const auto VK = PotentialFamily::constants(1.0, 1.0);
  auto g1 = RadialGrid::log_grid(3, 1e-3, 50.0, 384);
  auto g2 = RadialGrid::log_grid(3, 1e-3, 50.0, 768);
  RadialFunction u1 = RadialFunction::sample(g1, bump);
  RadialFunction u2 = RadialFunction::sample(g2, bump);
  const AnnulusReport r1 = check_annulus_bound(u1, 0.5, 5.0, 3.0, VK, VK, p);
  const AnnulusReport r2 = check_annulus_bound(u2, 0.5, 5.0, 3.0, VK, VK, p);
  CHECK(r1.t > 4.0 / 3.0);
  CHECK(r1.q_tilde > 1.0);
  CHECK(r1.q_tilde < 3.0);
  CHECK(r1.empirical_C > 0.0);
  CHECK(std::abs(r1.empirical_C - r2.empirical_C) / r2.empirical_C < 0.05);
  CHECK_THROWS_AS(check_annulus_bound(RadialFunction::zero(g1), 0.5, 5.0, 3.0, VK, VK, p),
                  std::domain_error);
  CHECK_THROWS_AS(check_annulus_bound(u1, 5.0, 0.5, 3.0, VK, VK, p),
                  std::invalid_argument);
}

TEST_CASE("weighted regional bound: preconditions and the five cases") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  const auto VK = PotentialFamily::constants(1.0, 1.0);
  RadialFunction u = RadialFunction::sample(g, [](double r) {
    const double x = (r - 1.0) / 0.6;
    return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, 5.0) : 0.0;
  });
  BoundContext ctx;
  ctx.region = RegionKind::Ball;
  ctx.r_hi = 4.0;
  ctx.nu = 0.0;
  ctx.m = 1.0 + 1e-12;  // max of the bump
  SUBCASE("q below the threshold is a domain error") {
    ctx.beta = 0.8;
    CHECK_THROWS_AS(check_lemma41(u, ctx, 1.5, VK, VK, p), std::invalid_argument);
  }
  SUBCASE("envelope violations name the node") {
    ctx.beta = 0.0;
    ctx.m = 0.5;
    try {
      check_lemma41(u, ctx, 2.0, VK, VK, p);
      CHECK(false);
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
  }
  SUBCASE("all five cases hold with margin") {
    for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      ctx.beta = beta;
      ctx.m = 1.0 + 1e-12;
      const Lemma41Report rep =
          check_lemma41(u, ctx, std::max(1.0, 2.0 * beta) + 0.7, VK, VK, p);
      CHECK(rep.holds);
      CHECK(rep.lhs <= rep.rhs * 1.05);
    }
  }
}
