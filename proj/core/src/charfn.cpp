#include "rz2/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rz2 {

void ThetaParams::validate() const {
  for (double v : {sigma, beta, sigma_p, beta_p, kappa}) {
    if (!std::isfinite(v)) throw std::invalid_argument("ThetaParams: non-finite field");
  }
  if (sigma < 0.0 || sigma_p < 0.0) {
    throw std::invalid_argument("ThetaParams: sigma and sigma_p must be >= 0");
  }
}

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::GammaX: return "GammaX";
    case ClassLabel::ThetaProper: return "ThetaProper";
    case ClassLabel::GammaRTimesM1Z2: return "GammaR_times_M1Z2";
    case ClassLabel::SignedOnly: return "SignedOnly";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, ClassLabel label) { return os << to_string(label); }

std::complex<double> cf_eval(const ThetaParams& p, const Character& y) {
  const double s = y.s;
  if (!y.l) return std::exp(std::complex<double>(-p.sigma * s * s, p.beta * s));
  return p.kappa * std::exp(std::complex<double>(-p.sigma_p * s * s, p.beta_p * s));
}

std::complex<double> cf_eval_complex(const ThetaParams& p, std::complex<double> s, Bit l) {
  constexpr std::complex<double> i{0.0, 1.0};
  if (!l) return std::exp(-p.sigma * s * s + i * p.beta * s);
  return p.kappa * std::exp(-p.sigma_p * s * s + i * p.beta_p * s);
}

double kappa_bound(double sigma, double beta, double sigma_p, double beta_p) {
  if (!(sigma_p > 0.0 && sigma_p < sigma)) {
    throw std::domain_error("kappa_bound requires 0 < sigma_p < sigma");
  }
  const double db = beta - beta_p;
  return std::sqrt(sigma_p / sigma) * std::exp(-db * db / (4.0 * (sigma - sigma_p)));
}

Membership is_probability(const ThetaParams& p) {
  p.validate();
  const double ak = std::abs(p.kappa);
  const bool same_fibers = std::abs(p.sigma - p.sigma_p) <= kBoundaryTol &&
                           std::abs(p.beta - p.beta_p) <= kBoundaryTol;
  if (same_fibers) {
    if (std::abs(ak - 1.0) <= kBoundaryTol) return {true, ClassLabel::GammaX};
    if (ak < 1.0) return {true, ClassLabel::GammaRTimesM1Z2};
    return {false, ClassLabel::SignedOnly};
  }
  if (p.sigma_p > kBoundaryTol && p.sigma_p < p.sigma - kBoundaryTol) {
    const double bound = kappa_bound(p.sigma, p.beta, p.sigma_p, p.beta_p);
    if (ak > 0.0 && ak <= bound + kBoundaryTol) return {true, ClassLabel::ThetaProper};
  }
  return {false, ClassLabel::SignedOnly};
}

double gauss_density(double sigma, double mean, double t) {
  const double d = t - mean;
  return std::exp(-d * d / (4.0 * sigma)) / std::sqrt(4.0 * std::numbers::pi * sigma);
}

double fiber_density(const ThetaParams& p, Bit k, double t) {
  if (p.sigma <= 0.0 || p.sigma_p <= 0.0) throw AtomicFiberError();
  const double sign = k ? -1.0 : 1.0;
  return 0.5 * (gauss_density(p.sigma, p.beta, t) +
                sign * p.kappa * gauss_density(p.sigma_p, p.beta_p, t));
}

double fiber_mass(const ThetaParams& p, Bit k) {
  const double sign = k ? -1.0 : 1.0;
  return 0.5 * (1.0 + sign * p.kappa);
}

ThetaParams convolve(const ThetaParams& p, const ThetaParams& q) {
  return {p.sigma + q.sigma, p.beta + q.beta, p.sigma_p + q.sigma_p, p.beta_p + q.beta_p,
          p.kappa * q.kappa};
}

ThetaParams reflect(const ThetaParams& p) {
  return {p.sigma, -p.beta, p.sigma_p, -p.beta_p, p.kappa};
}

ThetaParams symmetrize(const ThetaParams& p) { return convolve(p, reflect(p)); }

double circle_max_modulus(const ThetaParams& p, Bit l, double r, int points) {
  double best = 0.0;
  for (int j = 0; j < points; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / points;
    best = std::max(best, std::abs(cf_eval_complex(p, std::polar(r, theta), l)));
  }
  return best;
}

std::ostream& operator<<(std::ostream& os, const ThetaParams& p) {
  return os << "{sigma=" << p.sigma << ", beta=" << p.beta << ", sigma_p=" << p.sigma_p
            << ", beta_p=" << p.beta_p << ", kappa=" << p.kappa << '}';
}

}  // namespace rz2
