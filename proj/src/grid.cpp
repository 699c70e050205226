#include "frs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace frs {

namespace {

// \int_a^b tau^k e^{c tau} d tau by series in c (|c (b-a)| is small here).
double exp_moment(double a, double b, int k, double c) {
  double sum = 0.0;
  double cj = 1.0;  // c^j / j!
  double pb = std::pow(b, k + 1), pa = std::pow(a, k + 1);
  int tiny = 0;
  for (int j = 0; j < 60; ++j) {
    const double term = cj * (pb - pa) / (k + j + 1);
    sum += term;
    // odd moments vanish on symmetric panels; stop on two consecutive
    // negligible terms only
    tiny = (std::abs(term) <= 1e-18 * std::abs(sum)) ? tiny + 1 : 0;
    if (tiny >= 2 && j > 2) break;
    cj *= c / (j + 1);
    pb *= b;
    pa *= a;
  }
  return sum;
}

// Solve the (n x n) Vandermonde-transposed system sum_j w_j tau_j^k = m_k.
std::vector<double> solve_vandermonde_t(const std::vector<double>& tau,
                                        const std::vector<double>& m) {
  const int n = static_cast<int>(tau.size());
  std::vector<double> a(n * n);
  std::vector<double> w = m;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) a[k * n + j] = std::pow(tau[j], k);
  // Gaussian elimination with partial pivoting; n <= 9
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[piv * n + col])) piv = row;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      std::swap(w[col], w[piv]);
    }
    const double d = a[col * n + col];
    if (d == 0.0) throw std::runtime_error("panel weights: singular system");
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / d;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
      w[row] -= f * w[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    for (int j = row + 1; j < n; ++j) w[row] -= a[row * n + j] * w[j];
    w[row] /= a[row * n + row];
  }
  return w;
}

}  // namespace

std::vector<double> exp_measure_panel_weights(const std::vector<double>& t,
                                              int lo, int hi, double c) {
  const int n = hi - lo + 1;
  const double tc = 0.5 * (t[lo] + t[hi]);
  const double scale = std::max(1e-30, 0.5 * (t[hi] - t[lo]));
  std::vector<double> tau(n), m(n);
  for (int j = 0; j < n; ++j) tau[j] = (t[lo + j] - tc) / scale;
  const double cs = c * scale;
  for (int k = 0; k < n; ++k) m[k] = exp_moment(tau.front(), tau.back(), k, cs);
  std::vector<double> w = solve_vandermonde_t(tau, m);
  const double pref = scale * std::exp(c * tc);
  for (double& x : w) x *= pref;
  return w;
}

RadialGrid::RadialGrid(int N, std::vector<double> nodes, int panel_degree) : N_(N) {
  if (N < 2) throw std::invalid_argument("RadialGrid: N >= 2");
  if (nodes.size() < 4) throw std::invalid_argument("RadialGrid: need >= 4 nodes");
  if (nodes.front() <= 0.0) throw std::invalid_argument("RadialGrid: r1 > 0");
  for (size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
  r_ = std::move(nodes);
  const int M = static_cast<int>(r_.size());

  std::vector<double> t(M);
  for (int i = 0; i < M; ++i) t[i] = std::log(r_[i]);

  // geometric detection
  geometric_ = true;
  h_ = (t[M - 1] - t[0]) / (M - 1);
  for (int i = 1; i < M; ++i)
    if (std::abs(t[i] - t[i - 1] - h_) > 1e-9 * std::max(1.0, std::abs(h_))) {
      geometric_ = false;
      break;
    }

  const int deg = std::max(1, panel_degree);
  w_.assign(M, 0.0);
  int lo = 0;
  while (lo < M - 1) {
    int hi = std::min(M - 1, lo + deg);
    std::vector<double> pw = exp_measure_panel_weights(t, lo, hi, double(N));
    for (int j = 0; j <= hi - lo; ++j) w_[lo + j] += pw[j];
    lo = hi;
  }
  for (double x : w_)
    if (!(x > 0.0)) throw std::runtime_error("RadialGrid: nonpositive quadrature weight");
}

std::shared_ptr<const RadialGrid> RadialGrid::log_grid(int N, double r1, double rM,
                                                       int M, int panel_degree) {
  if (!(rM > r1 && r1 > 0.0)) throw std::invalid_argument("log_grid: 0 < r1 < rM");
  std::vector<double> r(M);
  const double h = std::log(rM / r1) / (M - 1);
  for (int i = 0; i < M; ++i) r[i] = r1 * std::exp(h * i);
  r[M - 1] = rM;
  return std::make_shared<const RadialGrid>(N, std::move(r), panel_degree);
}

double RadialGrid::log_step() const {
  if (!geometric_) throw std::runtime_error("RadialGrid: grid is not geometric");
  return h_;
}

double RadialGrid::cell_lo(int i) const {
  return i == 0 ? r_.front() : std::sqrt(r_[i - 1] * r_[i]);
}

double RadialGrid::cell_hi(int i) const {
  return i == size() - 1 ? r_.back() : std::sqrt(r_[i] * r_[i + 1]);
}

double RadialGrid::integrate(const std::vector<double>& g) const {
  if (g.size() != r_.size()) throw std::invalid_argument("integrate: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < g.size(); ++i) s += w_[i] * g[i];
  return s;
}

void RadialGrid::write_profile_csv(const std::string& path, const RadialGrid& grid,
                                   const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "r,value\n";
  out.precision(17);
  for (int i = 0; i < grid.size(); ++i)
    out << grid.node(i) << "," << values[i] << "\n";
}

}  // namespace frs
