#include "frs/potentials.hpp"

#include <cmath>

namespace frs {

PotentialFamily::PotentialFamily(Variant v) : v_(std::move(v)) {
  if (auto* m = std::get_if<MixedPotentials>(&v_)) {
    if (!(m->a > 0.0 && m->b > 0.0))
      throw std::invalid_argument("mixed potentials require a > 0, b > 0");
  }
  if (auto* t = std::get_if<TabulatedPotentials>(&v_)) {
    if (!t->grid) throw std::invalid_argument("tabulated potentials need a grid");
    const size_t M = t->grid->nodes().size();
    if (t->V.size() != M || t->K.size() != M)
      throw std::invalid_argument("tabulated potentials: size mismatch");
    for (double x : t->V)
      if (!(x >= 0.0)) throw std::invalid_argument("tabulated V must be >= 0");
    for (double x : t->K)
      if (!(x > 0.0)) throw std::invalid_argument("tabulated K must be > 0");
  }
}

PotentialFamily PotentialFamily::constants(double v0, double k0) {
  if (!(v0 >= 0.0) || !(k0 > 0.0))
    throw std::invalid_argument("constants: need V >= 0 and K > 0");
  PotentialFamily f(PowerPotentials{0.0, 0.0});
  f.v_scale_ = v0;
  f.k_scale_ = k0;
  return f;
}

double PotentialFamily::V_at(double r) const {
  double val;
  if (auto* p = std::get_if<PowerPotentials>(&v_)) {
    val = std::pow(r, p->a);
  } else if (auto* e = std::get_if<ExponentialPotentials>(&v_)) {
    val = std::exp(e->cV * r);
  } else if (auto* m = std::get_if<MixedPotentials>(&v_)) {
    val = std::exp(-m->a * r);
  } else if (std::get_if<ZeroVPotentials>(&v_)) {
    val = 0.0;
  } else {
    auto& t = std::get<TabulatedPotentials>(v_);
    // nearest-node lookup; tabulated potentials are tied to their grid
    const auto& rs = t.grid->nodes();
    auto it = std::lower_bound(rs.begin(), rs.end(), r);
    size_t i = it == rs.end() ? rs.size() - 1 : static_cast<size_t>(it - rs.begin());
    if (i > 0 && r - rs[i - 1] < rs[i] - r) --i;
    val = t.V[i];
  }
  return v_scale_ * val;
}

double PotentialFamily::K_at(double r) const {
  double val;
  if (auto* p = std::get_if<PowerPotentials>(&v_)) {
    val = std::pow(r, p->b);
  } else if (auto* e = std::get_if<ExponentialPotentials>(&v_)) {
    val = std::exp(e->cK * r);
  } else if (auto* m = std::get_if<MixedPotentials>(&v_)) {
    val = std::pow(r, m->d) * std::exp(-m->b * r);
  } else if (auto* z = std::get_if<ZeroVPotentials>(&v_)) {
    val = std::pow(r, z->b);
  } else {
    auto& t = std::get<TabulatedPotentials>(v_);
    const auto& rs = t.grid->nodes();
    auto it = std::lower_bound(rs.begin(), rs.end(), r);
    size_t i = it == rs.end() ? rs.size() - 1 : static_cast<size_t>(it - rs.begin());
    if (i > 0 && r - rs[i - 1] < rs[i] - r) --i;
    val = t.K[i];
  }
  return k_scale_ * val;
}

std::vector<double> PotentialFamily::V_on(const RadialGrid& grid) const {
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = V_at(grid.node(i));
  return out;
}

std::vector<double> PotentialFamily::K_on(const RadialGrid& grid) const {
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = K_at(grid.node(i));
  return out;
}

const char* PotentialFamily::kind_name() const {
  switch (v_.index()) {
    case 0: return "power";
    case 1: return "exponential";
    case 2: return "mixed";
    case 3: return "zero_v";
    default: return "tabulated";
  }
}

}  // namespace frs
