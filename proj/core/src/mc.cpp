#include "rz2/mc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rz2/errors.hpp"
#include "rz2/parallel.hpp"
#include "rz2/seeding.hpp"

namespace rz2 {

SampleBatch sample(const ThetaParams& p, std::size_t n, std::uint64_t seed) {
  const Membership m = is_probability(p);
  if (!m.probability) throw std::invalid_argument("sample: parameters are not a probability law");

  const double mass1 = fiber_mass(p, 1);
  const bool rejection = m.label == ClassLabel::ThetaProper;
  if (rejection) {
    for (int k = 0; k < 2; ++k) {
      const double acceptance = fiber_mass(p, k);
      if (acceptance > kBoundaryTol && acceptance < kMinAcceptance) {
        std::ostringstream msg;
        msg << "ill-conditioned parameters: fiber " << k << " acceptance " << acceptance;
        throw PreconditionError(msg.str());
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution fiber(std::clamp(mass1, 0.0, 1.0));
  std::normal_distribution<double> wide(p.beta, std::sqrt(2.0 * p.sigma));
  std::normal_distribution<double> narrow(p.beta_p, std::sqrt(2.0 * p.sigma_p));
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SampleBatch batch;
  batch.seed = seed;
  batch.source = p;
  batch.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = fiber(rng) ? 1 : 0;
    double t = p.beta;
    if (!rejection) {
      if (p.sigma > 0.0) t = wide(rng);
    } else {
      const double sign = k ? -1.0 : 1.0;
      for (;;) {
        t = coin(rng) ? wide(rng) : narrow(rng);
        const double g1 = gauss_density(p.sigma, p.beta, t);
        const double g2 = gauss_density(p.sigma_p, p.beta_p, t);
        // f_k / (p_k * M * q) with M = 1 / p_k and q = (g1 + g2) / 2.
        if (unit(rng) * (g1 + g2) <= g1 + sign * p.kappa * g2) break;
      }
    }
    batch.points.push_back({t, k});
  }
  return batch;
}

PairedSample apply_forms(std::span<const SampleBatch> batches, const Coefficients& a,
                         const Coefficients& b) {
  if (a.size() != batches.size() || b.size() != batches.size()) {
    throw std::invalid_argument("apply_forms: one coefficient per batch required");
  }
  if (batches.empty()) return {};
  const std::size_t rows = batches.front().points.size();
  for (const auto& batch : batches) {
    if (batch.points.size() != rows) throw std::invalid_argument("apply_forms: unequal batch lengths");
  }
  PairedSample out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    GroupElement first, second;
    for (std::size_t j = 0; j < batches.size(); ++j) {
      const GroupElement& x = batches[j].points[r];
      first = first + apply(a[j], x);
      second = second + apply(b[j], x);
    }
    out[r] = {first, second};
  }
  return out;
}

FormsSamples sample_forms(const FormsProblem& problem, std::size_t n, std::uint64_t seed) {
  const std::size_t vars = problem.size();
  std::vector<SampleBatch> left, right;
  left.reserve(vars);
  right.reserve(vars);
  for (std::size_t j = 0; j < vars; ++j) {
    left.push_back(sample(problem.dists()[j], n, derive_seed(seed, j)));
    right.push_back(sample(problem.dists()[j], n, derive_seed(seed, vars + j)));
  }
  return {apply_forms(left, problem.a(), problem.b()),
          apply_forms(right, problem.c(), problem.d())};
}

double pair_distance(const PairedPoint& x, const PairedPoint& y) {
  const double d1 = x.first.t - y.first.t;
  const double d2 = x.second.t - y.second.t;
  const double disc = (x.first.k != y.first.k ? 1.0 : 0.0) + (x.second.k != y.second.k ? 1.0 : 0.0);
  return std::sqrt(d1 * d1 + d2 * d2 + disc);
}

namespace {

double mean_distance(const PairedSample& a, const PairedSample& b) {
  double sum = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) sum += pair_distance(x, y);
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

/// Pooled sample in structure-of-arrays form for the blocked kernel.
struct Pooled {
  std::vector<double> t1, t2, k1, k2;

  explicit Pooled(std::size_t n) : t1(n), t2(n), k1(n), k2(n) {}

  void set(std::size_t i, const PairedPoint& p) {
    t1[i] = p.first.t;
    t2[i] = p.second.t;
    k1[i] = p.first.k.value();
    k2[i] = p.second.k.value();
  }

  void fill_block(Eigen::MatrixXd& out, std::size_t i0, std::size_t j0) const {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const std::size_t jj = j0 + static_cast<std::size_t>(j);
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const std::size_t ii = i0 + static_cast<std::size_t>(i);
        const double d1 = t1[ii] - t1[jj];
        const double d2 = t2[ii] - t2[jj];
        const double e1 = k1[ii] - k1[jj];
        const double e2 = k2[ii] - k2[jj];
        out(i, j) = std::sqrt(d1 * d1 + d2 * d2 + e1 * e1 + e2 * e2);
      }
    }
  }
};

constexpr std::size_t kBlock = 512;

/// -diag(W^T D W) for the pooled distance matrix D, accumulated over upper
/// triangular blocks.
Eigen::RowVectorXd quadratic_forms(const Pooled& pooled, const Eigen::MatrixXd& weights) {
  const std::size_t n = static_cast<std::size_t>(weights.rows());
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Eigen::RowVectorXd> partial(blocks, Eigen::RowVectorXd::Zero(weights.cols()));

  parallel_for(blocks, [&](std::size_t bi) {
    const std::size_t i0 = bi * kBlock;
    const auto ni = static_cast<Eigen::Index>(std::min(kBlock, n - i0));
    Eigen::MatrixXd dist;
    Eigen::MatrixXd prod;
    for (std::size_t bj = bi; bj < blocks; ++bj) {
      const std::size_t j0 = bj * kBlock;
      const auto nj = static_cast<Eigen::Index>(std::min(kBlock, n - j0));
      dist.resize(ni, nj);
      pooled.fill_block(dist, i0, j0);
      prod.noalias() = dist * weights.middleRows(static_cast<Eigen::Index>(j0), nj);
      const double factor = (bi == bj) ? 1.0 : 2.0;
      partial[bi] -= factor * weights.middleRows(static_cast<Eigen::Index>(i0), ni)
                                  .cwiseProduct(prod)
                                  .colwise()
                                  .sum();
    }
  });

  Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(weights.cols());
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

double energy_distance(const PairedSample& a, const PairedSample& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("energy_distance: each sample needs at least two points");
  }
  return 2.0 * mean_distance(a, b) - mean_distance(a, a) - mean_distance(b, b);
}

PermutationResult permutation_test(const PairedSample& a, const PairedSample& b,
                                   std::size_t n_perm, std::uint64_t seed) {
  if (n_perm < 99) throw std::invalid_argument("permutation_test: need n_perm >= 99");
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("permutation_test: each sample needs at least two points");
  }
  const std::size_t na = a.size();
  const std::size_t n = na + b.size();
  Pooled pooled(n);
  for (std::size_t i = 0; i < na; ++i) pooled.set(i, a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) pooled.set(na + i, b[i]);

  const double wa = 1.0 / static_cast<double>(na);
  const double wb = -1.0 / static_cast<double>(b.size());
  const auto cols = static_cast<Eigen::Index>(n_perm + 1);
  Eigen::MatrixXd weights(static_cast<Eigen::Index>(n), cols);
  std::vector<std::size_t> order(n);
  for (Eigen::Index p = 0; p < cols; ++p) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (p > 0) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      weights(static_cast<Eigen::Index>(order[i]), p) = (i < na) ? wa : wb;
    }
  }

  const Eigen::RowVectorXd stats = quadratic_forms(pooled, weights);
  const double observed = stats(0);
  // Absorbs rounding in the blocked sums; real gaps are many orders larger.
  const double slack = 1e-12 * std::max(1.0, std::abs(observed));
  std::size_t at_least = 0;
  for (Eigen::Index p = 1; p < cols; ++p) {
    if (stats(p) >= observed - slack) ++at_least;
  }
  return {observed, static_cast<double>(1 + at_least) / static_cast<double>(n_perm + 1), n_perm};
}

}  // namespace rz2
