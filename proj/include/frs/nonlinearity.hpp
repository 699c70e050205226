#pragma once

#include <optional>
#include <vector>

namespace frs {

// Double-power nonlinearities: |f(t)| <= C min{|t|^{q1-1}, |t|^{q2-1}} with
// q1, q2 > 2, F' = f, F(0) = 0, and mu > 2 superquadratic control
// 0 <= mu F(t) <= f(t) t. Construction spot-checks all three conditions.
class Nonlinearity {
 public:
  enum class Kind { PurePower, MinPower, RationalPower };

  static Nonlinearity pure_power(double q, bool truncate_below_zero = false);
  static Nonlinearity min_power(double q1, double q2,
                                std::optional<double> mu = std::nullopt,
                                bool truncate_below_zero = false);
  static Nonlinearity rational_power(double q1, double q2,
                                     std::optional<double> mu = std::nullopt,
                                     bool truncate_below_zero = false);

  double f(double t) const;
  double fprime(double t) const;  // a.e. derivative
  double F(double t) const;

  Kind kind() const { return kind_; }
  double q1() const { return q1_; }
  double q2() const { return q2_; }
  double mu() const { return mu_; }
  double t0() const { return t0_; }  // a witness with F(t0) > 0
  bool truncated() const { return truncated_; }
  bool odd() const { return !truncated_; }
  const char* kind_name() const;

  // same shape with f set to zero below zero
  Nonlinearity truncated_below_zero() const;

 private:
  Nonlinearity() = default;
  void validate() const;  // growth + superquadratic spot checks
  double raw_f(double t) const;
  double raw_F(double t) const;
  double raw_fprime(double t) const;

  Kind kind_ = Kind::PurePower;
  double q1_ = 0.0, q2_ = 0.0, mu_ = 0.0, t0_ = 1.0;
  bool truncated_ = false;
  // rational kind: cumulative F on a log-|t| table
  std::vector<double> ftab_;
  double tab_lo_ = 0.0, tab_hi_ = 0.0, tab_dz_ = 0.0;
};

struct ArCheckReport {
  double max_violation = 0.0;  // largest relative (f3) defect over the samples
  double argmax = 0.0;
  int samples = 0;
};

// Verifies 0 <= mu F(t) <= f(t) t at the given sample points.
ArCheckReport ar_check(const Nonlinearity& f, const std::vector<double>& t_samples);

}  // namespace frs
