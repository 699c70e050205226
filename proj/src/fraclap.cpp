#include "frs/fraclap.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>

#include "frs/special.hpp"

namespace frs {

namespace {

// iterative radix-2 FFT, in place
void fft(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / double(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// DST-I of w[1..n-1]: S_k = sum_j w_j sin(pi j k / n), k = 1..n-1
void dst1(std::vector<double>& w) {
  const size_t n = w.size();
  std::vector<std::complex<double>> v(2 * n, 0.0);
  for (size_t j = 1; j < n; ++j) {
    v[j] = w[j];
    v[2 * n - j] = -w[j];
  }
  fft(v);
  for (size_t k = 1; k < n; ++k) w[k] = -0.5 * v[k].imag();
  w[0] = 0.0;
}

// Catmull-Rom on a uniform lattice: samples y[i] at positions lo + i*step
double interp_uniform(const std::vector<double>& y, double lo, double step,
                      double x) {
  const double f = (x - lo) / step;
  int i = static_cast<int>(std::floor(f));
  i = std::clamp(i, 1, static_cast<int>(y.size()) - 3);
  const double t = f - i;
  const double pm = y[i - 1], p0 = y[i], p1 = y[i + 1], p2 = y[i + 2];
  return p0 + 0.5 * t * (p1 - pm + t * (2 * pm - 5 * p0 + 4 * p1 - p2 +
                                        t * (3 * (p0 - p1) + p2 - pm)));
}

}  // namespace

FracLapOperator::FracLapOperator(std::shared_ptr<const RadialGrid> grid,
                                 const SpaceParams& p, FracLapMode mode,
                                 Extrapolation extrap, double tail_exponent,
                                 SpectralConfig sc)
    : grid_(std::move(grid)), p_(p), mode_(mode), extrap_(extrap),
      tail_exp_(tail_exponent) {
  if (grid_->dim() != p.N) throw std::invalid_argument("FracLapOperator: N mismatch");
  if (mode_ == FracLapMode::DirectIntegral) {
    nonlocal_form(grid_, p_, extrap_, tail_exp_);  // warm the cache
    return;
  }
  if (p_.N == 3) {
    // sine-transform backend: r u(r) is a 1-D Fourier-sine profile in 3-D
    const double rM = grid_->node(grid_->size() - 1);
    sine_L_ = sc.xi_hi > 0 ? sc.xi_hi : 8.0 * rM;  // domain length
    sine_n_ = sc.M_xi > 0 ? sc.M_xi : 1 << 18;
    mult_.resize(sine_n_);
    for (int k = 0; k < sine_n_; ++k)
      mult_[k] = std::pow(M_PI * k / sine_L_, 2.0 * p_.s);
    return;
  }
  const double rM = grid_->node(grid_->size() - 1);
  const double xi_lo = sc.xi_lo > 0 ? sc.xi_lo : 0.05 / rM;
  // the forward quadrature only resolves the oscillatory kernel over a
  // limited band of the log grid; keep the multiplier inside it
  const double xi_hi = sc.xi_hi > 0 ? sc.xi_hi : std::max(8.0, 600.0 / rM);
  const int Mxi = sc.M_xi > 0 ? sc.M_xi : 2 * grid_->size();
  xi_ = RadialGrid::log_grid(p.N, xi_lo, xi_hi, Mxi);
  psi_.resize(Mxi, grid_->size());
  for (int k = 0; k < Mxi; ++k)
    for (int i = 0; i < grid_->size(); ++i)
      psi_(k, i) = radial_fourier_kernel(p.N, xi_->node(k) * grid_->node(i));
  mult_.resize(Mxi);
  for (int k = 0; k < Mxi; ++k) mult_[k] = std::pow(xi_->node(k), 2.0 * p.s);
}

RadialFunction FracLapOperator::apply(const RadialFunction& u) const {
  if (u.grid.get() != grid_.get())
    throw std::invalid_argument("FracLapOperator::apply: grid mismatch");
  RadialFunction out = u;
  if (mode_ == FracLapMode::DirectIntegral) {
    const auto& form = nonlocal_form(grid_, p_, extrap_, tail_exp_);
    out.v = form.apply_strong(u.v);
    return out;
  }
  const int M = grid_->size();
  if (p_.N == 3) {
    const int n = sine_n_;
    const double L = sine_L_, dx = L / n;
    const double r1 = grid_->node(0), rM = grid_->node(M - 1);
    const double t1 = std::log(r1), h = grid_->log_step();
    std::vector<double> w(n, 0.0);
    for (int j = 1; j < n; ++j) {
      const double x = j * dx;
      double ux;
      if (x <= r1) {
        ux = u.v.front();
      } else if (x >= rM) {
        ux = u.extrap == Extrapolation::PowerTail
                 ? u.v.back() * std::pow(x / rM, u.tail_exponent)
                 : 0.0;
      } else {
        ux = interp_uniform(u.v, t1 / h, 1.0, std::log(x) / h);
      }
      // cosine taper over the last tenth keeps the odd extension clean
      if (x > 0.9 * L) {
        const double t = (x - 0.9 * L) / (0.1 * L);
        ux *= 0.5 * (1.0 + std::cos(M_PI * t));
      }
      w[j] = x * ux;
    }
    dst1(w);
    for (int k = 0; k < n; ++k) w[k] *= mult_[k] * 2.0 / n;
    dst1(w);
    std::vector<double> av(n, 0.0);
    for (int j = 1; j < n; ++j) av[j] = w[j] / (j * dx);
    // near the origin the action is even and smooth: a + b r^2 through the
    // first two interior samples
    const double a1 = av[1], a2 = av[2];
    const double b = (a2 - a1) / (3.0 * dx * dx);
    const double a0 = a1 - b * dx * dx;
    for (int i = 0; i < M; ++i) {
      const double r = grid_->node(i);
      out.v[i] = (r < 2.0 * dx) ? a0 + b * r * r
                                : interp_uniform(av, 0.0, dx, r);
    }
    return out;
  }
  const int Mxi = xi_->size();
  Eigen::VectorXd wu(M);
  for (int i = 0; i < M; ++i) wu(i) = grid_->weight(i) * u.v[i];
  Eigen::VectorXd uhat = psi_ * wu;
  for (int k = 0; k < Mxi; ++k) uhat(k) *= mult_[k] * xi_->weight(k);
  Eigen::VectorXd res = psi_.transpose() * uhat;
  for (int i = 0; i < M; ++i) out.v[i] = res(i);
  return out;
}

double FracLapOperator::quadratic_form(const RadialFunction& u) const {
  if (mode_ == FracLapMode::DirectIntegral) {
    // exact pairing with the assembled form
    const auto& form = nonlocal_form(grid_, p_, extrap_, tail_exp_);
    return form.seminorm_sq(u.v);
  }
  const RadialFunction au = apply(u);
  std::vector<double> prod(u.v.size());
  for (size_t i = 0; i < u.v.size(); ++i) prod[i] = au.v[i] * u.v[i];
  return sphere_area(p_.N) * grid_->integrate(prod);
}

Eigen::MatrixXd FracLapOperator::action_matrix() const {
  const int M = grid_->size();
  if (mode_ == FracLapMode::DirectIntegral) {
    const auto& form = nonlocal_form(grid_, p_, extrap_, tail_exp_);
    Eigen::MatrixXd A = form.matrix();
    const double area = sphere_area(p_.N);
    for (int i = 0; i < M; ++i) A.row(i) /= area * grid_->weight(i);
    return A;
  }
  // column-by-column application of the active spectral backend
  Eigen::MatrixXd A(M, M);
  RadialFunction e;
  e.grid = grid_;
  e.v.assign(M, 0.0);
  for (int j = 0; j < M; ++j) {
    e.v[j] = 1.0;
    const RadialFunction col = apply(e);
    for (int i = 0; i < M; ++i) A(i, j) = col.v[i];
    e.v[j] = 0.0;
  }
  return A;
}

void FracLapOperator::export_binary(const std::string& path) const {
  const Eigen::MatrixXd A = action_matrix();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const uint32_t M = static_cast<uint32_t>(A.rows());
  const float s = static_cast<float>(p_.s);
  out.write(reinterpret_cast<const char*>(&M), 4);
  out.write(reinterpret_cast<const char*>(&s), 4);
  for (uint32_t i = 0; i < M; ++i)
    for (uint32_t j = 0; j < M; ++j) {
      const double v = A(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

ResidualReport pde_residual_report(const RadialFunction& u, const PotentialFamily& V,
                                   const PotentialFamily& K, const Nonlinearity& f,
                                   const SpaceParams& p, FracLapMode mode) {
  FracLapOperator op(u.grid, p, mode, u.extrap,
                     u.extrap == Extrapolation::PowerTail ? u.tail_exponent : 0.0);
  const RadialFunction au = op.apply(u);
  const auto& g = *u.grid;
  std::vector<double> sq(g.size()), fq(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    const double force = K.K_at(r) * f.f(u.v[i]);
    const double res = au.v[i] + V.V_at(r) * u.v[i] - force;
    sq[i] = res * res;
    fq[i] = force * force;
  }
  ResidualReport rep;
  rep.absolute = std::sqrt(sphere_area(p.N) * g.integrate(sq));
  const double fn = std::sqrt(sphere_area(p.N) * g.integrate(fq));
  rep.relative = fn > 0.0 ? rep.absolute / fn : std::numeric_limits<double>::infinity();
  return rep;
}

double pde_residual(const RadialFunction& u, const PotentialFamily& V,
                    const PotentialFamily& K, const Nonlinearity& f,
                    const SpaceParams& p, FracLapMode mode) {
  return pde_residual_report(u, V, K, f, p, mode).absolute;
}

}  // namespace frs
