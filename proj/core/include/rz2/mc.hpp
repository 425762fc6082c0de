// Monte Carlo confirmation: sampling from Theta-family laws, realizing the
// linear forms, and a permutation energy test of identical distribution.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rz2/charfn.hpp"
#include "rz2/forms.hpp"
#include "rz2/group.hpp"

namespace rz2 {

struct SampleBatch {
  std::vector<GroupElement> points;
  std::uint64_t seed = 0;
  ThetaParams source;
};

/// Rejection acceptance below which sample() refuses to run.
inline constexpr double kMinAcceptance = 1e-4;

/// n draws from the law with parameters p.
///
/// The fiber k is drawn with probability fiber_mass(p, k). For laws with
/// 0 < sigma_p < sigma the position on the fiber comes from rejection
/// sampling against the proposal (g_{sigma,beta} + g_{sigma_p,beta_p}) / 2,
/// whose acceptance rate on fiber k is exactly fiber_mass(p, k). When the two
/// fibers share sigma and beta the position is a plain normal draw (a point
/// mass if sigma = 0). Throws std::invalid_argument if p is not a
/// probability law and PreconditionError if the acceptance rate of a fiber
/// with positive mass is below kMinAcceptance.
SampleBatch sample(const ThetaParams& p, std::size_t n, std::uint64_t seed);

struct PairedPoint {
  GroupElement first;
  GroupElement second;
};

using PairedSample = std::vector<PairedPoint>;

/// Row r holds (sum_j a_j x_j, sum_j b_j x_j) with x_j = batches[j].points[r].
PairedSample apply_forms(std::span<const SampleBatch> batches, const Coefficients& a,
                         const Coefficients& b);

struct FormsSamples {
  PairedSample first;   ///< realizations of (L1, L2)
  PairedSample second;  ///< independent realizations of (L3, L4)
};

/// Two independent samples of size n: (L1, L2) from one set of draws and
/// (L3, L4) from a fresh set. Variable j uses sub-seeds derived from
/// (seed, j) and (seed, size + j).
FormsSamples sample_forms(const FormsProblem& problem, std::size_t n, std::uint64_t seed);

/// Metric on X x X: sqrt(sum over both components of dt^2 + w^2 [dk != 0]),
/// with w = 1.
double pair_distance(const PairedPoint& x, const PairedPoint& y);

/// V-statistic energy distance 2 E d(a, b) - E d(a, a') - E d(b, b').
/// Requires at least two points in each sample.
double energy_distance(const PairedSample& a, const PairedSample& b);

struct PermutationResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_perm = 0;
};

/// Permutation test of equality in law based on energy_distance.
///
/// p = (1 + #{permuted statistic >= observed}) / (n_perm + 1). All
/// statistics are evaluated together as -w^T D w over blocks of the pooled
/// distance matrix, so D is never stored whole. Requires n_perm >= 99.
PermutationResult permutation_test(const PairedSample& a, const PairedSample& b,
                                   std::size_t n_perm, std::uint64_t seed);

inline constexpr std::size_t kDefaultPermutations = 499;

}  // namespace rz2
