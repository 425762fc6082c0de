// Closed-form characteristic functions on X = R x Z(2).
//
// Every law handled by this library has a characteristic function of the form
//
//   mu^(s, 0) = exp(-sigma s^2 + i beta s)
//   mu^(s, 1) = kappa exp(-sigma_p s^2 + i beta_p s)
//
// Gaussian laws on X, the class Theta(X), Haar-type laws on the Z(2) factor
// and degenerate laws are all corners of this five-parameter family. Such a
// function is always the transform of a signed measure; is_probability()
// decides when that measure is a probability distribution.
#pragma once

#include <complex>
#include <iosfwd>
#include <string_view>

#include "rz2/group.hpp"

namespace rz2 {

struct ThetaParams {
  double sigma = 0.0;
  double beta = 0.0;
  double sigma_p = 0.0;
  double beta_p = 0.0;
  double kappa = 1.0;

  /// Throws std::invalid_argument if sigma or sigma_p is negative or any
  /// field is not finite.
  void validate() const;

  friend bool operator==(const ThetaParams&, const ThetaParams&) = default;
};

/// Point mass at the identity: (0, 0, 0, 0, 1).
constexpr ThetaParams degenerate_at_zero() { return {0.0, 0.0, 0.0, 0.0, 1.0}; }
/// Haar measure of the Z(2) factor: (0, 0, 0, 0, 0).
constexpr ThetaParams haar_z2() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }

enum class ClassLabel {
  GammaX,             ///< Gaussian on X (sigma = sigma_p, beta = beta_p, |kappa| = 1)
  ThetaProper,        ///< 0 < sigma_p < sigma, 0 < |kappa| <= bound
  GammaRTimesM1Z2,    ///< sigma = sigma_p, beta = beta_p, |kappa| < 1
  SignedOnly,         ///< not a probability measure
};

std::string_view to_string(ClassLabel label);
std::ostream& operator<<(std::ostream& os, ClassLabel label);

struct Membership {
  bool probability = false;
  ClassLabel label = ClassLabel::SignedOnly;
};

/// Absolute tolerance used for all class-boundary comparisons.
inline constexpr double kBoundaryTol = 1e-12;

std::complex<double> cf_eval(const ThetaParams& p, const Character& y);

/// Analytic continuation of cf_eval to complex s on the fiber l.
std::complex<double> cf_eval_complex(const ThetaParams& p, std::complex<double> s, Bit l);

/// sqrt(sigma_p / sigma) * exp(-(beta - beta_p)^2 / (4 (sigma - sigma_p))).
///
/// This is the infimum over t of g_{sigma,beta}(t) / g_{sigma_p,beta_p}(t),
/// where g_{v,m} is the normal density with mean m and variance 2v.
/// Throws std::domain_error unless 0 < sigma_p < sigma.
double kappa_bound(double sigma, double beta, double sigma_p, double beta_p);

Membership is_probability(const ThetaParams& p);

/// Normal density with mean `mean` and variance 2*sigma; sigma > 0.
double gauss_density(double sigma, double mean, double t);

/// Density of the restriction of the measure to the fiber R x {k}.
///
/// f_k(t) = (g_{sigma,beta}(t) + (-1)^k kappa g_{sigma_p,beta_p}(t)) / 2.
/// Throws AtomicFiberError if sigma or sigma_p is zero.
double fiber_density(const ThetaParams& p, Bit k, double t);

/// Total mass (1 + (-1)^k kappa) / 2 of the fiber R x {k}.
double fiber_mass(const ThetaParams& p, Bit k);

/// Parameters of the convolution, i.e. of the pointwise cf product.
ThetaParams convolve(const ThetaParams& p, const ThetaParams& q);

/// Law of -xi; its cf is the complex conjugate.
ThetaParams reflect(const ThetaParams& p);

/// convolve(p, reflect(p)); the cf becomes |cf|^2 > 0 wherever cf != 0.
ThetaParams symmetrize(const ThetaParams& p);

/// Largest |cf(s, l)| over `points` equally spaced s on the circle |s| = r.
double circle_max_modulus(const ThetaParams& p, Bit l, double r, int points);

class AtomicFiberError : public std::domain_error {
 public:
  AtomicFiberError() : std::domain_error("atomic fiber: law has no Lebesgue density") {}
};

std::ostream& operator<<(std::ostream& os, const ThetaParams& p);

}  // namespace rz2
