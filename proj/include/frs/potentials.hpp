#pragma once

#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "frs/grid.hpp"

namespace frs {

// Radial potential pair (V, K): V >= 0 may vanish, K > 0.
// Families mirror the model cases handled by the exponent calculus.

struct PowerPotentials {
  double a;  // V(r) = r^a
  double b;  // K(r) = r^b
};

struct ExponentialPotentials {
  double cV;  // V(r) = e^{cV r}
  double cK;  // K(r) = e^{cK r}
};

struct MixedPotentials {
  double a;  // V(r) = e^{-a r}, a > 0
  double b;  // K(r) = r^d e^{-b r}, b > 0
  double d;
};

struct ZeroVPotentials {
  double b;          // K(r) = r^b
  double alpha0;     // user-supplied envelope exponent near 0
  double alpha_inf;  // user-supplied envelope exponent near infinity
};

struct TabulatedPotentials {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> V;  // >= 0 pointwise
  std::vector<double> K;  // > 0 pointwise
};

class PotentialFamily {
 public:
  using Variant = std::variant<PowerPotentials, ExponentialPotentials,
                               MixedPotentials, ZeroVPotentials, TabulatedPotentials>;

  PotentialFamily(Variant v);  // validates family invariants

  static PotentialFamily power(double a, double b) { return PotentialFamily(PowerPotentials{a, b}); }
  static PotentialFamily exponential(double cV, double cK) {
    return PotentialFamily(ExponentialPotentials{cV, cK});
  }
  static PotentialFamily mixed(double a, double b, double d) {
    return PotentialFamily(MixedPotentials{a, b, d});
  }
  static PotentialFamily zero_v(double b, double alpha0, double alpha_inf) {
    return PotentialFamily(ZeroVPotentials{b, alpha0, alpha_inf});
  }
  static PotentialFamily tabulated(std::shared_ptr<const RadialGrid> grid,
                                   std::vector<double> V, std::vector<double> K) {
    return PotentialFamily(TabulatedPotentials{std::move(grid), std::move(V), std::move(K)});
  }
  // constant potentials V = v0, K = k0 (power family with zero exponents scaled)
  static PotentialFamily constants(double v0, double k0);

  double V_at(double r) const;
  double K_at(double r) const;
  std::vector<double> V_on(const RadialGrid& grid) const;
  std::vector<double> K_on(const RadialGrid& grid) const;

  const Variant& value() const { return v_; }
  template <class T> const T* as() const { return std::get_if<T>(&v_); }
  const char* kind_name() const;

 private:
  Variant v_;
  double v_scale_ = 1.0, k_scale_ = 1.0;  // used by constants()
};

}  // namespace frs
