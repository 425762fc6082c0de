#include "rz2/fd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rz2/errors.hpp"
#include "rz2/parallel.hpp"
#include "rz2/seeding.hpp"

namespace rz2 {

RealFunction delta(RealFunction f, double h) {
  const double domain = f.domain;
  return {[g = std::move(f.fn), h](double s) { return g(s + h) - g(s); }, domain};
}

double composed_difference(const RealFunction& f, std::span<const double> steps, double s) {
  const std::size_t m = steps.size();
  if (m >= 31) throw std::invalid_argument("composed_difference: too many steps");
  double sum = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double shift = 0.0;
    int picked = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        shift += steps[i];
        ++picked;
      }
    }
    const double sign = ((static_cast<int>(m) - picked) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * f(s + shift);
  }
  return sum;
}

namespace {

/// Delta_h^m f(s) = sum_k (-1)^(m-k) C(m, k) f(s + k h).
double power_difference(const RealFunction& f, int m, double h, double s) {
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(s + k * h);
    binom = binom * (m - k) / (k + 1);
  }
  return sum;
}

constexpr int kSamplePoints = 25;

}  // namespace

std::optional<int> poly_degree(const RealFunction& f, std::span<const double> h_set, double tol) {
  if (h_set.empty()) throw std::invalid_argument("poly_degree: h_set must be nonempty");
  if (!(tol > 0.0)) throw std::invalid_argument("poly_degree: tol must be positive");
  for (int l = 0; l <= kMaxPolyOrder; ++l) {
    double worst = 0.0;
    for (int i = 0; i < kSamplePoints; ++i) {
      const double s = -f.domain + 2.0 * f.domain * i / (kSamplePoints - 1);
      for (double h : h_set) {
        worst = std::max(worst, std::abs(power_difference(f, l + 1, h, s)));
      }
    }
    if (worst <= tol) return l;
  }
  return std::nullopt;
}

namespace {

void require_pivot(const FormsProblem& problem, std::size_t pivot) {
  if (pivot >= problem.size()) throw std::out_of_range("pivot index out of range");
  const auto& a = problem.a()[pivot];
  if (std::abs(a.re) <= kZeroTol || a.disc.value() != 1) {
    std::ostringstream msg;
    msg << "pivot " << pivot << " needs a' != 0 and a'' = 1, got a = " << a;
    throw PreconditionError(msg.str());
  }
}

/// a'_p b'_j - b'_p a'_j
double cross(const FormsProblem& problem, std::size_t p, std::size_t j) {
  return problem.a()[p].re * problem.b()[j].re - problem.b()[p].re * problem.a()[j].re;
}

/// Indices merged into psi together with the pivot.
std::vector<std::size_t> merged_indices(const FormsProblem& problem, std::size_t pivot) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < problem.size(); ++j) {
    if (j == pivot) continue;
    if (std::abs(cross(problem, pivot, j)) <= kZeroTol && problem.a()[j].disc.value() == 1) {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace

RealFunction build_psi(const FormsProblem& problem, std::size_t pivot) {
  require_pivot(problem, pivot);
  struct Term {
    double log_kappa;
    double sigma_p;
    double scale;
  };
  std::vector<std::size_t> idx{pivot};
  const auto merged = merged_indices(problem, pivot);
  idx.insert(idx.end(), merged.begin(), merged.end());

  const double ap = problem.a()[pivot].re;
  std::vector<Term> terms;
  for (std::size_t j : idx) {
    const auto& p = problem.dists()[j];
    const double scale = problem.a()[j].re / ap;
    const bool real_positive =
        p.kappa > 0.0 && (std::abs(p.beta_p) <= kBoundaryTol || std::abs(scale) <= kZeroTol);
    if (!real_positive) {
      std::ostringstream msg;
      msg << "fiber-1 characteristic function of law " << j << ' ' << p
          << " is not positive; symmetrize first";
      throw PreconditionError(msg.str());
    }
    terms.push_back({std::log(p.kappa), p.sigma_p, scale});
  }
  return {[terms](double s) {
            double sum = 0.0;
            for (const auto& t : terms) {
              const double x = t.scale * s;
              sum += t.log_kappa - t.sigma_p * x * x;
            }
            return sum;
          },
          5.0};
}

std::vector<double> Schedule::multipliers() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.multiplier);
  return out;
}

Schedule elimination_schedule(const FormsProblem& problem, std::size_t pivot) {
  require_pivot(problem, pivot);
  const std::size_t n = problem.size();
  const auto& a = problem.a();
  const auto& b = problem.b();
  const auto& c = problem.c();
  const auto& d = problem.d();

  std::vector<double> k_mult(n);
  for (std::size_t j = 0; j < n; ++j) {
    k_mult[j] = a[pivot].re * d[j].re - b[pivot].re * c[j].re;
    if (std::abs(k_mult[j]) <= kZeroTol) {
      std::ostringstream msg;
      msg << "pivot " << pivot << " violates a'_p d'_j - b'_p c'_j != 0 at j = " << j;
      throw PreconditionError(msg.str());
    }
  }

  std::vector<std::size_t> groups[4];
  for (std::size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    const bool independent = std::abs(cross(problem, pivot, j)) > kZeroTol;
    const bool disc = a[j].disc.value() == 1;
    groups[(independent ? 0 : 2) + (disc ? 1 : 0)].push_back(j);
  }

  Schedule sched;
  sched.pivot = pivot;
  sched.renumbering.push_back(pivot);
  for (const auto& g : groups) sched.renumbering.insert(sched.renumbering.end(), g.begin(), g.end());
  sched.n1 = 1 + groups[0].size();
  sched.n2 = sched.n1 + groups[1].size();
  sched.n3 = sched.n2 + groups[2].size();

  for (std::size_t r = n; r-- > 0;) {
    const std::size_t j = sched.renumbering[r];
    sched.steps.push_back({ScheduleStep::Phase::K, j, k_mult[j]});
  }
  for (std::size_t r = sched.n2; r-- > 1;) {
    const std::size_t j = sched.renumbering[r];
    sched.steps.push_back({ScheduleStep::Phase::L, j, cross(problem, pivot, j)});
  }
  return sched;
}

EliminationCheck verify_elimination(const FormsProblem& problem, std::size_t pivot,
                                    std::size_t trials, double tol, std::uint64_t seed) {
  return verify_elimination(problem, pivot, build_psi(problem, pivot), trials, tol, seed);
}

EliminationCheck verify_elimination(const FormsProblem& problem, std::size_t pivot,
                                    const RealFunction& psi, std::size_t trials, double tol,
                                    std::uint64_t seed) {
  const Schedule sched = elimination_schedule(problem, pivot);
  const double ap = problem.a()[pivot].re;
  const double bp = problem.b()[pivot].re;
  const auto mult = sched.multipliers();

  std::vector<double> residual(trials, 0.0);
  parallel_for(trials, [&](std::size_t trial) {
    std::mt19937_64 rng(derive_seed(seed, trial));
    std::uniform_real_distribution<double> point(-1.0, 1.0);
    std::uniform_real_distribution<double> free_param(0.1, 2.0);
    const double s1 = point(rng);
    const double s2 = point(rng);
    std::vector<double> steps(mult.size());
    for (std::size_t i = 0; i < mult.size(); ++i) steps[i] = mult[i] * free_param(rng);
    residual[trial] = std::abs(composed_difference(psi, steps, ap * s1 + bp * s2));
  });

  EliminationCheck out;
  out.tol = tol;
  out.order = sched.order();
  for (double r : residual) out.max_residual = std::max(out.max_residual, r);
  return out;
}

}  // namespace rz2
