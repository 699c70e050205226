#include "frs/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

#include "gauss.hpp"

namespace frs {

namespace {
double sgn(double t) { return t < 0.0 ? -1.0 : 1.0; }
}

Nonlinearity Nonlinearity::pure_power(double q, bool trunc) {
  if (!(q > 2.0)) throw std::invalid_argument("pure_power: q > 2 required");
  Nonlinearity n;
  n.kind_ = Kind::PurePower;
  n.q1_ = n.q2_ = q;
  n.mu_ = q;
  n.truncated_ = trunc;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::min_power(double q1, double q2, std::optional<double> mu,
                                     bool trunc) {
  if (!(q1 > 2.0 && q2 > 2.0))
    throw std::invalid_argument("min_power: q1, q2 > 2 required");
  Nonlinearity n;
  n.kind_ = Kind::MinPower;
  n.q1_ = q1;
  n.q2_ = q2;
  n.mu_ = mu.value_or(0.5 * std::min(q1, q2));
  n.truncated_ = trunc;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::rational_power(double q1, double q2,
                                          std::optional<double> mu, bool trunc) {
  if (!(q1 > 2.0 && q2 > 2.0))
    throw std::invalid_argument("rational_power: q1, q2 > 2 required");
  if (!(q1 <= q2)) throw std::invalid_argument("rational_power: q1 <= q2 required");
  Nonlinearity n;
  n.kind_ = Kind::RationalPower;
  n.q1_ = q1;
  n.q2_ = q2;
  n.mu_ = mu.value_or(0.5 * q1);
  n.truncated_ = trunc;
  // cumulative antiderivative on a log lattice
  const int nt = 16384;
  n.tab_lo_ = std::log(1e-8);
  n.tab_hi_ = std::log(1e6);
  n.tab_dz_ = (n.tab_hi_ - n.tab_lo_) / (nt - 1);
  n.ftab_.resize(nt);
  auto raw = [&](double t) {
    return std::pow(t, q2 - 1.0) / (1.0 + std::pow(t, q2 - q1));
  };
  double t_prev = std::exp(n.tab_lo_);
  double acc = std::pow(t_prev, q2) / q2;  // F below the table start
  n.ftab_[0] = acc;
  for (int i = 1; i < nt; ++i) {
    const double t_next = std::exp(n.tab_lo_ + i * n.tab_dz_);
    acc += quad::gl16(raw, t_prev, t_next);
    n.ftab_[i] = acc;
    t_prev = t_next;
  }
  n.validate();
  return n;
}

double Nonlinearity::raw_f(double t) const {
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PurePower:
      return sgn(t) * std::pow(a, q1_ - 1.0);
    case Kind::MinPower:
      return sgn(t) * std::min(std::pow(a, q1_ - 1.0), std::pow(a, q2_ - 1.0));
    default:
      return sgn(t) * std::pow(a, q2_ - 1.0) / (1.0 + std::pow(a, q2_ - q1_));
  }
}

double Nonlinearity::raw_F(double t) const {
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PurePower:
      return std::pow(a, q1_) / q1_;
    case Kind::MinPower: {
      const double qm = std::min(q1_, q2_), qM = std::max(q1_, q2_);
      if (a <= 1.0) return std::pow(a, qM) / qM;
      return 1.0 / qM - 1.0 / qm + std::pow(a, qm) / qm;
    }
    default: {
      const double z = std::log(a);
      if (z <= tab_lo_) return std::pow(a, q2_) / q2_;
      if (z >= tab_hi_)  // asymptotically f ~ t^{q1-1}
        return ftab_.back() + (std::pow(a, q1_) - std::pow(std::exp(tab_hi_), q1_)) / q1_;
      const double fpos = (z - tab_lo_) / tab_dz_;
      const int i = std::min(static_cast<int>(fpos), static_cast<int>(ftab_.size()) - 2);
      const double w = fpos - i;
      // Hermite with exact slopes dF/dz = f(t) t
      const double t0v = std::exp(tab_lo_ + i * tab_dz_);
      const double t1v = std::exp(tab_lo_ + (i + 1) * tab_dz_);
      const double d0 = raw_f(t0v) * t0v * tab_dz_;
      const double d1 = raw_f(t1v) * t1v * tab_dz_;
      const double y0 = ftab_[i], y1 = ftab_[i + 1];
      const double w2 = w * w, w3 = w2 * w;
      return (2 * w3 - 3 * w2 + 1) * y0 + (w3 - 2 * w2 + w) * d0 +
             (-2 * w3 + 3 * w2) * y1 + (w3 - w2) * d1;
    }
  }
}

double Nonlinearity::raw_fprime(double t) const {
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PurePower:
      return (q1_ - 1.0) * std::pow(a, q1_ - 2.0);
    case Kind::MinPower: {
      const double q = std::pow(a, q1_ - 1.0) <= std::pow(a, q2_ - 1.0) ? q1_ : q2_;
      return (q - 1.0) * std::pow(a, q - 2.0);
    }
    default: {
      const double d = q2_ - q1_;
      const double den = 1.0 + std::pow(a, d);
      return ((q2_ - 1.0) * std::pow(a, q2_ - 2.0) * den -
              std::pow(a, q2_ - 1.0) * d * std::pow(a, d - 1.0)) /
             (den * den);
    }
  }
}

double Nonlinearity::f(double t) const {
  if (truncated_ && t < 0.0) return 0.0;
  return raw_f(t);
}

double Nonlinearity::fprime(double t) const {
  if (truncated_ && t < 0.0) return 0.0;
  return raw_fprime(t);
}

double Nonlinearity::F(double t) const {
  if (truncated_ && t <= 0.0) return 0.0;
  return raw_F(t);
}

Nonlinearity Nonlinearity::truncated_below_zero() const {
  Nonlinearity n = *this;
  n.truncated_ = true;
  return n;
}

const char* Nonlinearity::kind_name() const {
  switch (kind_) {
    case Kind::PurePower: return "pure_power";
    case Kind::MinPower: return "min_power";
    default: return "rational_power";
  }
}

void Nonlinearity::validate() const {
  // growth and superquadratic control on a log-spaced sample of t
  for (int i = 0; i <= 120; ++i) {
    const double t = std::pow(10.0, -6.0 + 0.1 * i);
    const double ft = raw_f(t);
    const double cap = std::min(std::pow(t, q1_ - 1.0), std::pow(t, q2_ - 1.0));
    if (std::abs(ft) > cap * (1.0 + 1e-12))
      throw std::logic_error("nonlinearity violates the double-power growth bound");
    const double Ft = raw_F(t);
    if (!(mu_ * Ft >= -1e-12) || mu_ * Ft > ft * t * (1.0 + 1e-9) + 1e-12)
      throw std::logic_error("nonlinearity violates the superquadratic condition");
  }
  if (!(raw_F(t0_) > 0.0)) throw std::logic_error("nonlinearity has F(t0) <= 0");
}

ArCheckReport ar_check(const Nonlinearity& f, const std::vector<double>& t_samples) {
  if (t_samples.empty()) throw std::invalid_argument("ar_check: no samples");
  ArCheckReport rep;
  rep.samples = static_cast<int>(t_samples.size());
  for (double t : t_samples) {
    const double Ft = f.F(t);
    const double ft_t = f.f(t) * t;
    // defect relative to the local scale of the two-sided bound
    const double scale = std::max(1.0, std::abs(ft_t));
    const double v = std::max(-f.mu() * Ft, f.mu() * Ft - ft_t) / scale;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.argmax = t;
    }
  }
  return rep;
}

}  // namespace frs
