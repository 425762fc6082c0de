#include "rz2/forms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rz2/errors.hpp"
#include "rz2/parallel.hpp"

namespace rz2 {

FormsProblem::FormsProblem(std::vector<ThetaParams> dists, Coefficients a, Coefficients b,
                           Coefficients c, Coefficients d, std::vector<std::size_t> copy_of)
    : dists_(std::move(dists)),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      copy_of_(std::move(copy_of)) {
  const std::size_t n = dists_.size();
  if (a_.size() != n || b_.size() != n || c_.size() != n || d_.size() != n) {
    throw std::invalid_argument("FormsProblem: coefficient lists must have one entry per law");
  }
  if (copy_of_.empty()) {
    copy_of_.resize(n);
    for (std::size_t j = 0; j < n; ++j) copy_of_[j] = j;
  }
  if (copy_of_.size() != n) throw std::invalid_argument("FormsProblem: copy_of has wrong length");
  for (std::size_t j = 0; j < n; ++j) {
    if (copy_of_[j] >= n || copy_of_[copy_of_[j]] != copy_of_[j] ||
        !(dists_[copy_of_[j]] == dists_[j])) {
      throw std::invalid_argument("FormsProblem: copy_of must point at a root variable with an identical law");
    }
    if (!is_probability(dists_[j]).probability) {
      std::ostringstream msg;
      msg << "FormsProblem: law " << j << ' ' << dists_[j] << " is not a probability measure";
      throw std::invalid_argument(msg.str());
    }
  }
}

FormsProblem FormsProblem::symmetrized() const {
  std::vector<ThetaParams> sym;
  sym.reserve(dists_.size());
  for (const auto& p : dists_) sym.push_back(symmetrize(p));
  return {std::move(sym), a_, b_, c_, d_, copy_of_};
}

FormsProblem FormsProblem::permuted(std::span<const std::size_t> order) const {
  const std::size_t n = size();
  if (order.size() != n) throw std::invalid_argument("permuted: order has wrong length");
  std::vector<std::size_t> inverse(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (order[j] >= n || inverse[order[j]] != n) {
      throw std::invalid_argument("permuted: order is not a permutation");
    }
    inverse[order[j]] = j;
  }
  std::vector<ThetaParams> dists(n);
  Coefficients a(n), b(n), c(n), d(n);
  std::vector<std::size_t> copy(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t old = order[j];
    dists[j] = dists_[old];
    a[j] = a_[old];
    b[j] = b_[old];
    c[j] = c_[old];
    d[j] = d_[old];
    copy[j] = inverse[copy_of_[old]];
  }
  return {std::move(dists), std::move(a), std::move(b), std::move(c), std::move(d),
          std::move(copy)};
}

std::vector<double> CharacterGrid::points() const {
  if (s_steps < 2 || !(s_max > 0.0)) {
    throw std::invalid_argument("CharacterGrid: need s_steps >= 2 and s_max > 0");
  }
  std::vector<double> pts(static_cast<std::size_t>(s_steps));
  for (int i = 0; i < s_steps; ++i) {
    pts[static_cast<std::size_t>(i)] = -s_max + 2.0 * s_max * i / (s_steps - 1);
  }
  return pts;
}

namespace {

std::complex<double> side(const FormsProblem& problem, const Coefficients& first,
                          const Coefficients& second, const Character& u, const Character& v) {
  std::complex<double> prod{1.0, 0.0};
  for (std::size_t j = 0; j < problem.size(); ++j) {
    prod *= cf_eval(problem.dists()[j], apply(first[j], u) + apply(second[j], v));
  }
  return prod;
}

template <typename Visit>
void for_each_grid_row(const CharacterGrid& grid, Visit&& visit) {
  const auto pts = grid.points();
  parallel_for(pts.size(), [&](std::size_t row) { visit(row, pts); });
}

}  // namespace

std::complex<double> eq1_lhs(const FormsProblem& problem, const Character& u, const Character& v) {
  return side(problem, problem.a(), problem.b(), u, v);
}

std::complex<double> eq1_rhs(const FormsProblem& problem, const Character& u, const Character& v) {
  return side(problem, problem.c(), problem.d(), u, v);
}

std::vector<Eq1Sample> eq1_samples(const FormsProblem& problem, const CharacterGrid& grid) {
  const std::size_t m = grid.points().size();
  std::vector<Eq1Sample> out(m * m * 4);
  for_each_grid_row(grid, [&](std::size_t row, const std::vector<double>& pts) {
    for (std::size_t col = 0; col < m; ++col) {
      for (int l1 = 0; l1 < 2; ++l1) {
        for (int l2 = 0; l2 < 2; ++l2) {
          const Character u{pts[row], l1};
          const Character v{pts[col], l2};
          out[((row * m + col) * 2 + l1) * 2 + l2] =
              Eq1Sample{u, v, eq1_lhs(problem, u, v), eq1_rhs(problem, u, v)};
        }
      }
    }
  });
  return out;
}

double eq1_residual(const FormsProblem& problem, const CharacterGrid& grid) {
  const std::size_t m = grid.points().size();
  std::vector<double> row_max(m, 0.0);
  for_each_grid_row(grid, [&](std::size_t row, const std::vector<double>& pts) {
    double worst = 0.0;
    for (std::size_t col = 0; col < m; ++col) {
      for (int l1 = 0; l1 < 2; ++l1) {
        for (int l2 = 0; l2 < 2; ++l2) {
          const Character u{pts[row], l1};
          const Character v{pts[col], l2};
          worst = std::max(worst, std::abs(eq1_lhs(problem, u, v) - eq1_rhs(problem, u, v)));
        }
      }
    }
    row_max[row] = worst;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

bool vectors_identically_distributed(const FormsProblem& problem, const CharacterGrid& grid,
                                     double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return eq1_residual(problem, grid) <= tol;
}

ConditionReport condition_report(const FormsProblem& problem) {
  const std::size_t n = problem.size();
  const auto& a = problem.a();
  const auto& b = problem.b();
  const auto& c = problem.c();
  const auto& d = problem.d();
  ConditionReport report(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool all_aut = true;
    bool all_nonzero = true;
    for (std::size_t j = 0; j < n; ++j) {
      const Endomorphism m = combine(a[i], d[j], b[i], c[j]);
      all_aut = all_aut && is_aut(m);
      all_nonzero = all_nonzero && std::abs(m.re) > kZeroTol;
    }
    const bool disc_ok = a[i].disc.value() == 1 || b[i].disc.value() == 1;
    report[i] = {all_aut, all_nonzero && disc_ok, all_nonzero};
  }
  return report;
}

std::string_view to_string(ComponentLabel label) {
  switch (label) {
    case ComponentLabel::GammaX: return "GammaX";
    case ComponentLabel::ThetaX: return "ThetaX";
    case ComponentLabel::LambdaX: return "LambdaX";
    case ComponentLabel::NoGuarantee: return "NoGuarantee";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, ComponentLabel label) { return os << to_string(label); }

std::vector<ComponentLabel> classify_components(const FormsProblem& problem, bool allow_vanishing,
                                                const CharacterGrid& grid, double tol) {
  if (!allow_vanishing) {
    for (std::size_t j = 0; j < problem.size(); ++j) {
      if (std::abs(problem.dists()[j].kappa) <= kBoundaryTol) {
        throw PreconditionError("law " + std::to_string(j) +
                                " has a vanishing characteristic function (kappa = 0); "
                                "rerun with allow_vanishing");
      }
    }
  }
  const double residual = eq1_residual(problem, grid);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "(L1, L2) and (L3, L4) are not identically distributed: residual " << residual
        << " > tolerance " << tol;
    throw PreconditionError(msg.str());
  }

  const auto report = condition_report(problem);
  std::vector<ComponentLabel> labels(problem.size(), ComponentLabel::NoGuarantee);
  for (std::size_t i = 0; i < report.size(); ++i) {
    const auto& r = report[i];
    if (allow_vanishing) {
      if (r.stmt3) labels[i] = ComponentLabel::LambdaX;
    } else if (r.stmt1) {
      labels[i] = ComponentLabel::GammaX;
    } else if (r.stmt2) {
      labels[i] = ComponentLabel::ThetaX;
    } else if (r.stmt3) {
      labels[i] = ComponentLabel::LambdaX;
    }
  }
  // Enumerator order doubles as strength order: smaller is stronger.
  const auto& root = problem.copy_of();
  std::vector<ComponentLabel> best(labels.size(), ComponentLabel::NoGuarantee);
  for (std::size_t i = 0; i < labels.size(); ++i) best[root[i]] = std::min(best[root[i]], labels[i]);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = best[root[i]];
  return labels;
}

FormsProblem build_heyde(std::vector<ThetaParams> dists, Coefficients a, Coefficients b) {
  Coefficients d;
  d.reserve(b.size());
  for (const auto& bj : b) d.push_back(-bj);
  Coefficients c = a;
  return {std::move(dists), std::move(a), std::move(b), std::move(c), std::move(d)};
}

FormsProblem build_ds(std::vector<ThetaParams> dists, Coefficients a, Coefficients b) {
  const std::size_t n = dists.size();
  if (a.size() != n || b.size() != n) {
    throw std::invalid_argument("build_ds: coefficient lists must have one entry per law");
  }
  std::vector<ThetaParams> all = dists;
  all.insert(all.end(), dists.begin(), dists.end());
  Coefficients a2 = a, b2 = b, c2 = a, d2(n, Endomorphism::zero());
  a2.resize(2 * n, Endomorphism::zero());
  b2.resize(2 * n, Endomorphism::zero());
  c2.resize(2 * n, Endomorphism::zero());
  d2.insert(d2.end(), b.begin(), b.end());
  std::vector<std::size_t> copy(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    copy[j] = j;
    copy[n + j] = j;
  }
  return {std::move(all), std::move(a2), std::move(b2), std::move(c2), std::move(d2),
          std::move(copy)};
}

}  // namespace rz2
