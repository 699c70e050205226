#pragma once

#include <memory>
#include <string>
#include <vector>

namespace frs {

// 1-D radial quadrature grid for integrals of the form
//   \int_{r1}^{rM} g(r) r^{N-1} dr  ~=  sum_i w[i] g(r[i]).
//
// Nodes are geometric (uniform in t = log r); weights come from composite
// interpolatory panels in t with the measure e^{Nt} dt integrated exactly,
// so constants are reproduced to machine precision and smooth integrands
// at high order.
class RadialGrid {
 public:
  RadialGrid(int N, std::vector<double> nodes, int panel_degree = 4);

  static std::shared_ptr<const RadialGrid> log_grid(int N, double r1, double rM,
                                                    int M, int panel_degree = 4);

  int dim() const { return N_; }
  int size() const { return static_cast<int>(r_.size()); }
  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& weights() const { return w_; }
  double node(int i) const { return r_[i]; }
  double weight(int i) const { return w_[i]; }

  // log-step of the geometric lattice; throws if nodes are not geometric
  double log_step() const;
  bool is_geometric() const { return geometric_; }

  // cell edges (geometric midpoints), edge(0) = r1, edge(M) = rM
  double cell_lo(int i) const;
  double cell_hi(int i) const;

  // integral of g(r[i]) samples against r^{N-1} dr over [r1, rM]
  double integrate(const std::vector<double>& g) const;

  // CSV with header r,value
  static void write_profile_csv(const std::string& path,
                                const RadialGrid& grid,
                                const std::vector<double>& values);

 private:
  int N_;
  std::vector<double> r_;
  std::vector<double> w_;
  bool geometric_ = false;
  double h_ = 0.0;  // log step when geometric
};

// Interpolatory weights on nodes t[lo..hi] (inclusive) for the measure
// e^{c t} dt over [t[lo], t[hi]], exact for polynomials of degree hi-lo.
// Exposed for reuse on frequency grids.
std::vector<double> exp_measure_panel_weights(const std::vector<double>& t,
                                              int lo, int hi, double c);

}  // namespace frs
