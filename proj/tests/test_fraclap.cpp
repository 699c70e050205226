#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "frs/fraclap.hpp"
#include "frs/special.hpp"
#include "test_support.hpp"

using namespace frs;

namespace {
std::shared_ptr<const RadialGrid> desk_grid() {
  return RadialGrid::log_grid(3, 1e-3, 50.0, 512);
}
double weighted_rel_l2(const RadialGrid& g, const std::vector<double>& a,
                       const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    num += g.weight(i) * (a[i] - b[i]) * (a[i] - b[i]);
    den += g.weight(i) * b[i] * b[i];
  }
  return std::sqrt(num / den);
}
}  // namespace

TEST_CASE("apply: zero input, grid mismatch") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  FracLapOperator op(g, p, FracLapMode::DirectIntegral);
  RadialFunction z = RadialFunction::zero(g);
  const RadialFunction az = op.apply(z);
  for (double v : az.v) CHECK(v == doctest::Approx(0.0));
  auto g2 = RadialGrid::log_grid(3, 1e-3, 50.0, 128);
  RadialFunction other = RadialFunction::zero(g2);
  CHECK_THROWS_AS(op.apply(other), std::invalid_argument);
}

TEST_CASE("spectral and direct routes agree on a gaussian") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral);
  FracLapOperator spec(g, p, FracLapMode::Spectral);
  const RadialFunction ad = dir.apply(u), as = spec.apply(u);
  CHECK(weighted_rel_l2(*g, as.v, ad.v) < 1e-3);
  // both against the confluent-hypergeometric closed form, away from the edges
  const double pref = std::pow(4.0, p.s) * gamma_fn(1.5 + p.s) / gamma_fn(1.5);
  for (int i = 16; i < g->size() - 80; i += 37) {
    const double r = g->node(i);
    if (r > 8.0) break;
    const double exact = pref * oracle::kummer_m(1.5 + p.s, 1.5, -r * r);
    CHECK(ad.v[i] == doctest::Approx(exact).epsilon(2e-3));
    CHECK(as.v[i] == doctest::Approx(exact).epsilon(2e-3));
  }
}

TEST_CASE("both routes reproduce the critical bubble identity") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  const double pw = -0.5 * (3.0 - 2.0 * p.s);
  RadialFunction u = RadialFunction::sample(
      g, [&](double r) { return std::pow(1.0 + r * r, pw); });
  u.extrap = Extrapolation::PowerTail;
  u.tail_exponent = 2.0 * pw;
  const double St = std::pow(2.0, 2.0 * p.s) * gamma_fn(0.5 * (3 + 2 * p.s)) /
                    gamma_fn(0.5 * (3 - 2 * p.s));
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral, u.extrap, u.tail_exponent);
  FracLapOperator spec(g, p, FracLapMode::Spectral);
  const RadialFunction ad = dir.apply(u), as = spec.apply(u);
  for (int i = 8; i < g->size() - 40; i += 29) {
    const double r = g->node(i);
    const double exact = St * std::pow(1.0 + r * r, -0.5 * (3.0 + 2.0 * p.s));
    CHECK(ad.v[i] == doctest::Approx(exact).epsilon(5e-3));
    CHECK(as.v[i] == doctest::Approx(exact).epsilon(5e-2));
  }
}

TEST_CASE("quadratic form matches the seminorm square") {
  auto g = desk_grid();
  const SpaceParams p = make_space_params(3, 0.75);
  RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral);
  FracLapOperator spec(g, p, FracLapMode::Spectral);
  const double gag2 = std::pow(gagliardo_seminorm(u, p), 2);
  CHECK(dir.quadratic_form(u) == doctest::Approx(gag2).epsilon(1e-12));
  CHECK(spec.quadratic_form(u) == doctest::Approx(gag2).epsilon(1e-3));
}

TEST_CASE("direct matrix: symmetry in the weighted product, PSD, multiplier sign") {
  auto g = RadialGrid::log_grid(3, 1e-2, 20.0, 160);
  const SpaceParams p = make_space_params(3, 0.75);
  const NonlocalForm& form = nonlocal_form(g, p, Extrapolation::ZeroBeyond);
  const Eigen::MatrixXd& Q = form.matrix();
  CHECK((Q - Q.transpose()).cwiseAbs().maxCoeff() <=
        1e-10 * Q.cwiseAbs().maxCoeff());
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(Q.rows());
    for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    CHECK(v.dot(Q * v) >= -1e-12 * v.squaredNorm() * Q.cwiseAbs().maxCoeff());
  }
  // self-adjointness of the strong action in the row-measure product
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral);
  RadialFunction a = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  RadialFunction b = RadialFunction::sample(g, [](double r) { return r * std::exp(-r); });
  const RadialFunction Aa = dir.apply(a), Ab = dir.apply(b);
  const auto& rw = form.row_weights();
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    lhs += rw[i] * Aa.v[i] * b.v[i];
    rhs += rw[i] * a.v[i] * Ab.v[i];
    scale += rw[i] * std::abs(Aa.v[i] * b.v[i]);
  }
  CHECK(std::abs(lhs - rhs) <= 1e-8 * scale);
  FracLapOperator spec(g, p, FracLapMode::Spectral);
  for (double m : spec.multiplier()) CHECK(m >= 0.0);
}

TEST_CASE("constant profiles continued by the same constant are annihilated") {
  auto g = RadialGrid::log_grid(3, 1e-2, 20.0, 160);
  const SpaceParams p = make_space_params(3, 0.75);
  // power tail with exponent zero is exactly the constant continuation
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral, Extrapolation::PowerTail, 0.0);
  RadialFunction c = RadialFunction::sample(g, [](double) { return 1.0; });
  c.extrap = Extrapolation::PowerTail;
  c.tail_exponent = 0.0;
  RadialFunction bump = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  bump.extrap = Extrapolation::PowerTail;
  bump.tail_exponent = 0.0;
  const RadialFunction ac = dir.apply(c), ab = dir.apply(bump);
  double nc = 0.0, nb = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    nc += g->weight(i) * ac.v[i] * ac.v[i];
    nb += g->weight(i) * ab.v[i] * ab.v[i];
  }
  CHECK(std::sqrt(nc) <= 1e-8 * std::sqrt(nb));
}

TEST_CASE("pde residual: zero at zero, homogeneity broken by the nonlinearity") {
  auto g = RadialGrid::log_grid(3, 1e-2, 20.0, 160);
  const SpaceParams p = make_space_params(3, 0.75);
  const auto VK = PotentialFamily::constants(1.0, 1.0);
  const Nonlinearity f = Nonlinearity::pure_power(3.0);
  CHECK(pde_residual(RadialFunction::zero(g), VK, VK, f, p,
                     FracLapMode::DirectIntegral) == doctest::Approx(0.0));
  RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  RadialFunction u2 = u;
  for (double& x : u2.v) x *= 2.0;
  const double r1 = pde_residual(u, VK, VK, f, p, FracLapMode::DirectIntegral);
  const double r2 = pde_residual(u2, VK, VK, f, p, FracLapMode::DirectIntegral);
  CHECK(std::abs(r2 - 2.0 * r1) > 1e-6 * r1);
}

TEST_CASE("binary export carries the header and action entries") {
  auto g = RadialGrid::log_grid(3, 1e-2, 20.0, 96);
  const SpaceParams p = make_space_params(3, 0.75);
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral);
  const std::string path =
      (std::filesystem::temp_directory_path() / "frs_op.bin").string();
  dir.export_binary(path);
  std::ifstream in(path, std::ios::binary);
  uint32_t M = 0;
  float s = 0;
  in.read(reinterpret_cast<char*>(&M), 4);
  in.read(reinterpret_cast<char*>(&s), 4);
  CHECK(M == 96);
  CHECK(s == doctest::Approx(0.75f));
  const Eigen::MatrixXd A = dir.action_matrix();
  std::vector<double> row(M);
  in.read(reinterpret_cast<char*>(row.data()), 8 * M);
  for (uint32_t j = 0; j < M; ++j) CHECK(row[j] == doctest::Approx(A(0, j)));
  std::filesystem::remove(path);
}

TEST_CASE("generic-dimension spectral route stays diagnostic-grade") {
  const SpaceParams p = make_space_params(2, 0.75);
  auto g = RadialGrid::log_grid(2, 1e-3, 50.0, 384);
  RadialFunction u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  FracLapOperator dir(g, p, FracLapMode::DirectIntegral);
  FracLapOperator spec(g, p, FracLapMode::Spectral);
  CHECK(spec.quadratic_form(u) ==
        doctest::Approx(dir.quadratic_form(u)).epsilon(1e-3));
  const RadialFunction ad = dir.apply(u), as = spec.apply(u);
  CHECK(weighted_rel_l2(*g, as.v, ad.v) < 2e-2);
}
