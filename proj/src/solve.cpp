#include "frs/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "frs/special.hpp"

namespace frs {

VariationalProblem::VariationalProblem(std::shared_ptr<const RadialGrid> grid,
                                       const SpaceParams& p,
                                       const PotentialFamily& V,
                                       const PotentialFamily& K)
    : grid_(std::move(grid)), p_(p), V_(V), K_(K),
      tail_exp_(-0.5 * (p.N - 2.0 * p.s)) {
  const auto& form = nonlocal_form(grid_, p_, Extrapolation::PowerTail, tail_exp_);
  const int M = grid_->size();
  const double area = sphere_area(p.N);
  G_ = form.matrix();
  Kw_.resize(M);
  // masses use the form's row measure, so stationary points satisfy the
  // strong-form equation of the DirectIntegral operator exactly
  const auto& rw = form.row_weights();
  for (int i = 0; i < M; ++i) {
    const double r = grid_->node(i);
    const double vi = V_.V_at(r);
    if (!(vi >= 0.0)) throw std::domain_error("VariationalProblem: V must be >= 0");
    const double ki = K_.K_at(r);
    if (!(ki > 0.0)) throw std::domain_error("VariationalProblem: K must be > 0");
    G_(i, i) += area * rw[i] * vi;
    Kw_(i) = area * rw[i] * ki;
  }
  G_ldlt_.compute(G_);
  if (G_ldlt_.info() != Eigen::Success)
    throw std::runtime_error("VariationalProblem: factorization failed");
}

double VariationalProblem::norm_sq(const Eigen::VectorXd& u) const {
  return u.dot(G_ * u);
}

double VariationalProblem::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(G_ * b);
}

double VariationalProblem::dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return std::sqrt(std::max(0.0, norm_sq(a - b)));
}

double VariationalProblem::energy(const Eigen::VectorXd& u, const Nonlinearity& f) const {
  double nl = 0.0;
  for (int i = 0; i < u.size(); ++i) nl += Kw_(i) * f.F(u(i));
  return 0.5 * norm_sq(u) - nl;
}

Eigen::VectorXd VariationalProblem::coord_gradient(const Eigen::VectorXd& u,
                                                   const Nonlinearity& f) const {
  Eigen::VectorXd g = G_ * u;
  for (int i = 0; i < u.size(); ++i) g(i) -= Kw_(i) * f.f(u(i));
  return g;
}

Eigen::VectorXd VariationalProblem::riesz(const Eigen::VectorXd& cg) const {
  Eigen::VectorXd g = G_ldlt_.solve(cg);
  if (!g.allFinite()) throw std::runtime_error("riesz: linear solve failed");
  return g;
}

double VariationalProblem::grad_norm(const Eigen::VectorXd& u,
                                     const Nonlinearity& f) const {
  const Eigen::VectorXd cg = coord_gradient(u, f);
  return std::sqrt(std::max(0.0, riesz(cg).dot(cg)));
}

double VariationalProblem::nehari_residual(const Eigen::VectorXd& u,
                                           const Nonlinearity& f) const {
  const double n2 = norm_sq(u);
  if (!(n2 > 0.0)) return std::numeric_limits<double>::infinity();
  double fu = 0.0;
  for (int i = 0; i < u.size(); ++i) fu += Kw_(i) * f.f(u(i)) * u(i);
  return std::abs(n2 - fu) / n2;
}

Eigen::VectorXd VariationalProblem::newton_step(const Eigen::VectorXd& u,
                                                const Nonlinearity& f,
                                                double damping) const {
  Eigen::MatrixXd J = G_;
  for (int i = 0; i < u.size(); ++i) {
    J(i, i) -= Kw_(i) * f.fprime(u(i));
    if (damping > 0.0) J(i, i) += damping * std::abs(G_(i, i));
  }
  const Eigen::VectorXd rhs = -coord_gradient(u, f);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
  Eigen::VectorXd d = lu.solve(rhs);
  if (!d.allFinite()) {
    // fall back to a ridge when the Jacobian is singular at a fold
    Eigen::MatrixXd Jr = J + 1e-8 * Eigen::MatrixXd::Identity(u.size(), u.size());
    d = Eigen::PartialPivLU<Eigen::MatrixXd>(Jr).solve(rhs);
  }
  return d;
}

RadialFunction VariationalProblem::wrap(const Eigen::VectorXd& u) const {
  RadialFunction out;
  out.grid = grid_;
  out.v.assign(u.data(), u.data() + u.size());
  out.extrap = Extrapolation::PowerTail;
  out.tail_exponent = tail_exp_;
  return out;
}

// ------------------------------------------------------------- free functions

namespace {

Eigen::VectorXd to_vec(const RadialFunction& u) {
  return Eigen::Map<const Eigen::VectorXd>(u.v.data(), u.v.size());
}

// initial profile: Gaussian bump scaled so max = 2 t0
Eigen::VectorXd default_seed_profile(const RadialGrid& g, double t0) {
  Eigen::VectorXd u(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    u(i) = std::exp(-(r - 1.0) * (r - 1.0) / 0.5);
  }
  u *= 2.0 * t0 / u.maxCoeff();
  return u;
}

std::pair<double, Eigen::VectorXd> find_endpoint_impl(const VariationalProblem& P,
                                                      const Eigen::VectorXd& u0,
                                                      const Nonlinearity& f) {
  const double m = u0.cwiseAbs().maxCoeff();
  if (!(m > 0.0)) throw std::domain_error("find_endpoint: u0 must be nonzero");
  if (m < f.t0())
    throw std::domain_error("find_endpoint: need |u0| >= t0 somewhere");
  double lam = 1.0;
  for (int k = 0; k < 61; ++k) {
    if (P.energy(lam * u0, f) < -1.0) return {lam, lam * u0};
    lam *= 2.0;
  }
  throw std::runtime_error(
      "find_endpoint: energy stayed above -1 up to lambda = 2^60; "
      "superquadratic growth conditions look misconfigured");
}

struct PathState {
  std::vector<Eigen::VectorXd> z;
  int argmax = 0;
  double emax = 0.0;
};

void path_energies(const VariationalProblem& P, const Nonlinearity& f, PathState& st) {
  st.emax = -std::numeric_limits<double>::infinity();
  for (size_t k = 1; k + 1 < st.z.size(); ++k) {
    const double e = P.energy(st.z[k], f);
    if (e > st.emax) {
      st.emax = e;
      st.argmax = static_cast<int>(k);
    }
  }
}

// re-sample the polyline at equal H-arclength
void redistribute(const VariationalProblem& P, PathState& st) {
  const int Pn = static_cast<int>(st.z.size());
  std::vector<double> cum(Pn, 0.0);
  for (int k = 1; k < Pn; ++k)
    cum[k] = cum[k - 1] + std::max(P.dist(st.z[k], st.z[k - 1]), 1e-300);
  std::vector<Eigen::VectorXd> out(Pn);
  out[0] = st.z[0];
  out[Pn - 1] = st.z[Pn - 1];
  int seg = 1;
  for (int k = 1; k + 1 < Pn; ++k) {
    const double target = cum[Pn - 1] * k / (Pn - 1);
    while (seg < Pn - 1 && cum[seg] < target) ++seg;
    const double t = (target - cum[seg - 1]) / (cum[seg] - cum[seg - 1]);
    out[k] = (1.0 - t) * st.z[seg - 1] + t * st.z[seg];
  }
  st.z = std::move(out);
}

struct DeflationSet {
  const std::vector<Eigen::VectorXd>* priors = nullptr;
  const VariationalProblem* P = nullptr;
  double factor(const Eigen::VectorXd& u) const {
    if (!priors) return 1.0;
    double f = 1.0;
    for (const auto& w : *priors) {
      const double d2p = std::max(P->norm_sq(u - w), 1e-12);
      const double d2m = std::max(P->norm_sq(u + w), 1e-12);
      f *= (1.0 + 1.0 / d2p) * (1.0 + 1.0 / d2m);
    }
    return std::min(f, 1e6);
  }
  // directional derivative of log(factor) along d, in the H geometry
  double dlog_along(const Eigen::VectorXd& u, const Eigen::VectorXd& d) const {
    if (!priors) return 0.0;
    double acc = 0.0;
    for (const auto& w : *priors) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        const Eigen::VectorXd diff = sgn == 0 ? (u - w).eval() : (u + w).eval();
        const double d2 = std::max(P->norm_sq(diff), 1e-12);
        const double eta = 1.0 + 1.0 / d2;
        // grad eta = -2/d^4 * G diff; pair against d through the G metric
        acc += (-2.0 / (d2 * d2)) * P->inner(diff, d) / eta;
      }
    }
    return acc;
  }
};

// Newton refinement of grad E = 0, with the Sherman-Morrison deflation factor
// applied to the step; measures progress in the deflated gradient norm.
void newton_polish(const VariationalProblem& P, const Nonlinearity& f,
                   const MountainPassConfig& cfg, const DeflationSet& defl,
                   Eigen::VectorXd& u) {
  auto defl_gn = [&](const Eigen::VectorXd& x) {
    return P.grad_norm(x, f) * defl.factor(x);
  };
  double gn = defl_gn(u);
  double damping = 0.0;
  for (int nit = 0; nit < cfg.newton_max && gn > cfg.tol; ++nit) {
    Eigen::VectorXd d = P.newton_step(u, f, damping);
    const double theta = defl.dlog_along(u, d);
    double alpha = 1.0 / (1.0 - theta);
    if (!std::isfinite(alpha) || std::abs(alpha) > 50.0)
      alpha = alpha > 0.0 || !std::isfinite(alpha) ? 50.0 : -50.0;
    d *= alpha;
    double t = 1.0;
    bool ok = false;
    for (int bt = 0; bt < 12; ++bt) {
      const double gtrial = defl_gn(u + t * d);
      if (std::isfinite(gtrial) && (gtrial < gn * (1.0 - 1e-4 * t) || gtrial < cfg.tol)) {
        u += t * d;
        gn = gtrial;
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (ok) {
      damping = damping < 1e-8 ? 0.0 : damping / 4.0;
    } else {
      // stiffen toward a gradient-flow step of the residual merit and retry
      damping = std::max(damping * 8.0, 1e-4);
      if (damping > 1e8) break;
    }
  }
}

Solution run_mountain_pass(const VariationalProblem& P, const Nonlinearity& f_in,
                           const MountainPassConfig& cfg,
                           const Eigen::VectorXd& seed_profile,
                           const DeflationSet& defl) {
  const Nonlinearity f = cfg.nonneg ? f_in.truncated_below_zero() : f_in;
  auto [lam, e_end] = find_endpoint_impl(P, seed_profile, f);
  (void)lam;

  const int Pn = std::max(8, cfg.path_nodes);
  PathState st;
  st.z.resize(Pn);
  for (int k = 0; k < Pn; ++k) st.z[k] = (double(k) / (Pn - 1)) * e_end;

  Solution sol;
  double step = 1.0;
  double best_emax = std::numeric_limits<double>::max();
  int stall = 0;
  int it = 0;
  for (; it < cfg.max_outer; ++it) {
    path_energies(P, f, st);
    const int k = st.argmax;
    Eigen::VectorXd& zk = st.z[k];
    const Eigen::VectorXd cg = P.coord_gradient(zk, f);
    Eigen::VectorXd g = P.riesz(cg);
    const double gn2 = g.dot(cg);
    const double gn = std::sqrt(std::max(0.0, gn2));
    if (st.emax < best_emax - 1e-13 * std::max(1.0, std::abs(best_emax))) {
      best_emax = st.emax;
      stall = 0;
      sol.path_history.emplace_back(it, st.emax);
    } else if (++stall > cfg.patience) {
      break;
    }
    if (gn * defl.factor(zk) < cfg.coarse_tol) break;

    // descend the path maximum with an energy-decreasing backtracked step;
    // the move is capped by the local node spacing so the iterate stays on
    // the ridge instead of sliding into the unbounded valley
    const double spacing =
        std::min(P.dist(st.z[k], st.z[k - 1]), P.dist(st.z[k], st.z[k + 1]));
    const double e0 = P.energy(zk, f);
    double eta = std::min(step * defl.factor(zk), 0.75 * spacing / std::max(gn, 1e-300));
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd trial = zk - eta * g;
      const double et = P.energy(trial, f);
      if (std::isfinite(et) && et <= e0 - 1e-4 * eta * gn2) {
        zk = std::move(trial);
        step = std::min(eta / defl.factor(zk) * 1.5, 64.0);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) step = std::max(step * 0.5, 1e-12);
    redistribute(P, st);
  }
  sol.outer_iterations = it;

  // local refinement from the path maximum
  path_energies(P, f, st);
  Eigen::VectorXd u = st.z[st.argmax];
  newton_polish(P, f, cfg, defl, u);
  double gn = P.grad_norm(u, f);

  const double un = std::sqrt(std::max(0.0, P.norm_sq(u)));
  if (!(un > cfg.collapse_norm))
    throw std::runtime_error(
        "mountain_pass: iterate collapsed to zero; mountain-pass geometry lost");

  sol.u = P.wrap(u);
  sol.energy = P.energy(u, f);
  sol.grad_norm = gn;
  sol.nehari_residual = P.nehari_residual(u, f);
  sol.nonneg = u.minCoeff() >= -1e-10;
  sol.converged = gn < cfg.tol;
  sol.pde_residual =
      pde_residual(sol.u, P.V(), P.K(), f, P.params(), FracLapMode::DirectIntegral);
  const ResidualReport cross =
      pde_residual_report(sol.u, P.V(), P.K(), f, P.params(), FracLapMode::Spectral);
  sol.pde_residual_cross = cross.absolute;
  sol.pde_residual_cross_rel = cross.relative;
  if (cfg.nonneg && !sol.nonneg) sol.converged = false;
  return sol;
}

}  // namespace

double energy(const RadialFunction& u, const PotentialFamily& V,
              const PotentialFamily& K, const Nonlinearity& f, const SpaceParams& p) {
  VariationalProblem P(u.grid, p, V, K);
  return P.energy(to_vec(u), f);
}

RadialFunction energy_gradient(const RadialFunction& u, const PotentialFamily& V,
                               const PotentialFamily& K, const Nonlinearity& f,
                               const SpaceParams& p) {
  VariationalProblem P(u.grid, p, V, K);
  return P.wrap(P.riesz(P.coord_gradient(to_vec(u), f)));
}

std::pair<double, RadialFunction> find_endpoint(const RadialFunction& u0,
                                                const PotentialFamily& V,
                                                const PotentialFamily& K,
                                                const Nonlinearity& f,
                                                const SpaceParams& p) {
  VariationalProblem P(u0.grid, p, V, K);
  auto [lam, e] = find_endpoint_impl(P, to_vec(u0), f);
  return {lam, P.wrap(e)};
}

Solution mountain_pass(const PotentialFamily& V, const PotentialFamily& K,
                       const Nonlinearity& f, const SpaceParams& p,
                       const MountainPassConfig& cfg) {
  if (!cfg.grid) throw std::invalid_argument("mountain_pass: config needs a grid");
  VariationalProblem P(cfg.grid, p, V, K);
  const Eigen::VectorXd u0 = default_seed_profile(*cfg.grid, f.t0());
  return run_mountain_pass(P, f, cfg, u0, DeflationSet{});
}

Solution deflate_and_continue(const std::vector<Solution>& found,
                              const PotentialFamily& V, const PotentialFamily& K,
                              const Nonlinearity& f, const SpaceParams& p,
                              const MountainPassConfig& cfg) {
  if (found.empty())
    throw std::invalid_argument("deflate_and_continue: need at least one solution");
  for (double t : {0.3, 0.9, 1.7, 2.5}) {
    if (std::abs(f.f(t) + f.f(-t)) > 1e-12 * std::max(1.0, std::abs(f.f(t))))
      throw std::invalid_argument("deflate_and_continue: f must be odd");
  }
  if (!cfg.grid) throw std::invalid_argument("deflate_and_continue: config needs a grid");
  VariationalProblem P(cfg.grid, p, V, K);

  std::vector<Eigen::VectorXd> priors;
  for (const auto& s : found) priors.push_back(to_vec(s.u));
  DeflationSet defl{&priors, &P};

  MountainPassConfig c = cfg;
  c.nonneg = false;  // respect oddness
  c.newton_max = std::max(cfg.newton_max, 200);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);

  Solution best_miss;
  double best_miss_dist = -1.0;
  const auto& g = *cfg.grid;
  for (int attempt = 0; attempt < cfg.deflation_budget; ++attempt) {
    // sign-alternating multi-bump starts swept over amplitude
    const int bands = 1 + attempt % 4;
    const double amp = std::pow(2.0, (attempt / 4) % 3);
    Eigen::VectorXd u0(g.size());
    const double tlo = std::log(g.node(0)), thi = std::log(g.node(g.size() - 1));
    for (int i = 0; i < g.size(); ++i) {
      const double r = g.node(i);
      const double x = (std::log(r) - tlo) / (thi - tlo);
      const double env = std::exp(-(r - 1.2) * (r - 1.2) / 1.2);
      u0(i) = env * std::cos(bands * M_PI * (x * 3.0 - 0.9) + jitter(rng));
    }
    u0 *= 2.0 * amp * f.t0() / u0.cwiseAbs().maxCoeff();
    // deflated Newton straight from the swept start; a path relaxation here
    // would slide every start into the ground-state basin first
    Eigen::VectorXd unew = u0;
    newton_polish(P, f, c, defl, unew);
    const double gn = P.grad_norm(unew, f);
    const double nn = std::sqrt(std::max(0.0, P.norm_sq(unew)));
    if (std::getenv("FRS_DEFLATION_TRACE"))
      std::fprintf(stderr, "[deflation] attempt %d (bands=%d amp=%g): gn=%.3e |u|=%.4g E=%.6g\n",
                   attempt, bands, amp, gn, nn, P.energy(unew, f));
    if (!(gn < cfg.tol) || !(nn > cfg.collapse_norm)) continue;
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& w : priors)
      dmin = std::min({dmin, P.dist(unew, w), P.dist(unew, Eigen::VectorXd(-w))});
    Solution s;
    s.u = P.wrap(unew);
    s.energy = P.energy(unew, f);
    s.grad_norm = gn;
    s.nehari_residual = P.nehari_residual(unew, f);
    s.nonneg = unew.minCoeff() >= -1e-10;
    s.converged = true;
    s.pde_residual =
        pde_residual(s.u, P.V(), P.K(), f, P.params(), FracLapMode::DirectIntegral);
    const ResidualReport cross =
        pde_residual_report(s.u, P.V(), P.K(), f, P.params(), FracLapMode::Spectral);
    s.pde_residual_cross = cross.absolute;
    s.pde_residual_cross_rel = cross.relative;
    if (dmin > cfg.separation) return s;
    if (dmin > best_miss_dist) {
      best_miss_dist = dmin;
      best_miss = s;
    }
  }
  throw std::runtime_error(
      "deflate_and_continue: budget exhausted; best candidate stayed within " +
      std::to_string(best_miss_dist) + " of a known solution");
}

}  // namespace frs
