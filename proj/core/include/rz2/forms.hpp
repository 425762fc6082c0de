// Four linear forms of independent X-valued random variables
//
//   L1 = sum a_j xi_j,  L2 = sum b_j xi_j,  L3 = sum c_j xi_j,  L4 = sum d_j xi_j
//
// with endomorphism coefficients, the characteristic-function equation that
// is equivalent to (L1, L2) ~ (L3, L4), and the coefficient conditions that
// determine which xi_i are forced into Gamma(X), Theta(X) or Lambda(X).
#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rz2/charfn.hpp"
#include "rz2/group.hpp"

namespace rz2 {

using Coefficients = std::vector<Endomorphism>;

class FormsProblem {
 public:
  /// Throws std::invalid_argument if the list lengths disagree or some law
  /// fails is_probability(). `copy_of[j]` names a variable that xi_j is an
  /// independent copy of (defaults to j itself).
  FormsProblem(std::vector<ThetaParams> dists, Coefficients a, Coefficients b, Coefficients c,
               Coefficients d, std::vector<std::size_t> copy_of = {});

  [[nodiscard]] std::size_t size() const { return dists_.size(); }
  [[nodiscard]] const std::vector<ThetaParams>& dists() const { return dists_; }
  [[nodiscard]] const Coefficients& a() const { return a_; }
  [[nodiscard]] const Coefficients& b() const { return b_; }
  [[nodiscard]] const Coefficients& c() const { return c_; }
  [[nodiscard]] const Coefficients& d() const { return d_; }
  [[nodiscard]] const std::vector<std::size_t>& copy_of() const { return copy_of_; }

  /// Same coefficients, every law replaced by symmetrize(law). The result
  /// still satisfies the functional equation whenever this problem does.
  [[nodiscard]] FormsProblem symmetrized() const;

  /// Variables reordered so that new index j holds old index order[j].
  [[nodiscard]] FormsProblem permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<ThetaParams> dists_;
  Coefficients a_, b_, c_, d_;
  std::vector<std::size_t> copy_of_;
};

/// Symmetric grid s in {-s_max, ..., s_max} with s_steps points; both
/// s-coordinates of (u, v) range over it, crossed with all (l1, l2).
struct CharacterGrid {
  double s_max = 5.0;
  int s_steps = 101;

  [[nodiscard]] std::vector<double> points() const;
};

/// Tolerance on the residual below which two vectors count as identically
/// distributed.
inline constexpr double kIdenticalTol = 1e-9;

/// prod_j mu_j(a_j u + b_j v), the characteristic function of (L1, L2).
std::complex<double> eq1_lhs(const FormsProblem& problem, const Character& u, const Character& v);
/// prod_j mu_j(c_j u + d_j v), the characteristic function of (L3, L4).
std::complex<double> eq1_rhs(const FormsProblem& problem, const Character& u, const Character& v);

struct Eq1Sample {
  Character u;
  Character v;
  std::complex<double> lhs;
  std::complex<double> rhs;
};

/// Both sides of the equation at every grid point, in row-major order
/// (s1, s2, l1, l2).
std::vector<Eq1Sample> eq1_samples(const FormsProblem& problem, const CharacterGrid& grid);

/// max |lhs - rhs| over the grid.
double eq1_residual(const FormsProblem& problem, const CharacterGrid& grid = {});

bool vectors_identically_distributed(const FormsProblem& problem, const CharacterGrid& grid,
                                     double tol);

struct ConditionFlags {
  bool stmt1 = false;  ///< a_i d_j - b_i c_j in Aut(X) for all j
  bool stmt2 = false;  ///< real parts nonzero for all j, and a''_i = 1 or b''_i = 1
  bool stmt3 = false;  ///< a'_i d'_j - b'_i c'_j != 0 for all j
};

using ConditionReport = std::vector<ConditionFlags>;

ConditionReport condition_report(const FormsProblem& problem);

enum class ComponentLabel { GammaX, ThetaX, LambdaX, NoGuarantee };

std::string_view to_string(ComponentLabel label);
std::ostream& operator<<(std::ostream& os, ComponentLabel label);

/// Strongest class guaranteed for each xi_i.
///
/// With allow_vanishing = false every law must have kappa != 0 and the labels
/// follow stmt1 -> GammaX, stmt2 -> ThetaX, stmt3 -> LambdaX. With
/// allow_vanishing = true only LambdaX is ever emitted. An independent copy
/// of a variable inherits the stronger of its own and its original's label.
/// Throws PreconditionError if (L1, L2) and (L3, L4) are not identically
/// distributed on `grid` within `tol`, or if a cf vanishes when it may not.
std::vector<ComponentLabel> classify_components(const FormsProblem& problem, bool allow_vanishing,
                                                const CharacterGrid& grid = {},
                                                double tol = kIdenticalTol);

/// L3 = L1, L4 = -L2: symmetry of the conditional law of L2 given L1.
FormsProblem build_heyde(std::vector<ThetaParams> dists, Coefficients a, Coefficients b);

/// Independence of L1 and L2: 2n variables xi_1..xi_n, xi'_1..xi'_n with
/// xi'_j an independent copy of xi_j, L3 = L1 and L4 = sum b_j xi'_j.
FormsProblem build_ds(std::vector<ThetaParams> dists, Coefficients a, Coefficients b);

}  // namespace rz2
