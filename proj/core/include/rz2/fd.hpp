// Finite differences and the elimination that reduces the fiber-1 part of the
// functional equation to an equation in a single function psi.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rz2/forms.hpp"

namespace rz2 {

/// A real function of one real variable with the half-width S of the
/// interval [-S, S] it is meant to be sampled on.
struct RealFunction {
  std::function<double(double)> fn;
  double domain = 5.0;

  double operator()(double s) const { return fn(s); }
};

/// (Delta_h f)(s) = f(s + h) - f(s).
RealFunction delta(RealFunction f, double h);

/// Delta_{h_1} ... Delta_{h_m} f evaluated at s, expanded over subsets of
/// the steps (2^m evaluations of f).
double composed_difference(const RealFunction& f, std::span<const double> steps, double s);

inline constexpr int kMaxPolyOrder = 12;

/// Smallest l such that |Delta_h^{l+1} f| <= tol at every sample point of the
/// domain and every h in h_set, for l up to kMaxPolyOrder; nullopt otherwise.
std::optional<int> poly_degree(const RealFunction& f, std::span<const double> h_set, double tol);

/// psi(s) = log mu(s, 1), where mu merges the pivot law with every xi_j whose
/// real coefficients are proportional to the pivot's (a'_p b'_j = b'_p a'_j)
/// and a''_j = 1: mu(s, l) = mu_p(s, l) prod_j mu_j((a'_j / a'_p) s, l).
///
/// Requires a'_p != 0, a''_p = 1 and strictly positive fiber-1 cf values of
/// every merged law (kappa > 0, beta_p = 0); otherwise throws
/// PreconditionError asking to symmetrize first.
RealFunction build_psi(const FormsProblem& problem, std::size_t pivot);

struct ScheduleStep {
  enum class Phase { K, L };
  Phase phase;
  std::size_t var;    ///< original variable index j the step removes
  double multiplier;  ///< a'_p d'_j - b'_p c'_j (K) or a'_p b'_j - b'_p a'_j (L)
};

struct Schedule {
  std::size_t pivot = 0;
  /// Pivot first, then the four groups in the order the elimination uses.
  std::vector<std::size_t> renumbering;
  /// One-based group boundaries: 2..n1, n1+1..n2, n2+1..n3, n3+1..n.
  std::size_t n1 = 1, n2 = 1, n3 = 1;
  std::vector<ScheduleStep> steps;

  [[nodiscard]] std::size_t order() const { return steps.size(); }
  [[nodiscard]] std::vector<double> multipliers() const;
};

/// The n K-steps (j = n down to 1 in renumbered order) followed by the
/// n2 - 1 L-steps (j = n2 down to 2). Throws PreconditionError naming the
/// offending j if a'_p d'_j - b'_p c'_j = 0, or if a'_p = 0 or a''_p = 0.
Schedule elimination_schedule(const FormsProblem& problem, std::size_t pivot);

struct EliminationCheck {
  double max_residual = 0.0;
  double tol = 0.0;
  std::size_t order = 0;
  [[nodiscard]] bool ok() const { return max_residual <= tol; }
};

/// Applies the composed schedule operator to psi(a'_p s1 + b'_p s2) for
/// `trials` random draws of s1, s2 in [-1, 1] and of the free step
/// parameters in [0.1, 2]. Each trial uses its own derived seed.
EliminationCheck verify_elimination(const FormsProblem& problem, std::size_t pivot,
                                    std::size_t trials, double tol, std::uint64_t seed = 1);

/// Same, with psi supplied by the caller (used for control functions).
EliminationCheck verify_elimination(const FormsProblem& problem, std::size_t pivot,
                                    const RealFunction& psi, std::size_t trials, double tol,
                                    std::uint64_t seed = 1);

}  // namespace rz2
