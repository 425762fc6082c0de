// Exact verification for X = Z(2).
//
// A law on Z(2) is determined by q = P(xi = 1); its characteristic function
// is 1 at the trivial character and 1 - 2q at the other one. All arithmetic
// in this module is over the rationals, so no tolerances appear.
#pragma once

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rz2::z2 {

using Rational = boost::rational<std::int64_t>;

/// Parses "p/q" or an integer "p". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

struct Z2Dist {
  Rational q;  ///< probability of the element 1

  /// Throws std::invalid_argument unless 0 <= q <= 1.
  explicit Z2Dist(Rational q_);

  [[nodiscard]] Rational cf(int y) const { return y == 0 ? Rational(1) : Rational(1) - 2 * q; }
  /// Degenerate (q in {0, 1}).
  [[nodiscard]] bool degenerate() const { return q == Rational(0) || q == Rational(1); }
  /// In I(Z(2)) = {E_0, E_1, Haar}.
  [[nodiscard]] bool in_haar_shifts() const { return degenerate() || q == Rational(1, 2); }
};

struct Z2Problem {
  std::vector<Z2Dist> dists;
  std::vector<int> a, b, c, d;  ///< bits

  [[nodiscard]] std::size_t size() const { return a.size(); }
  /// a_i d_j - b_i c_j = 1 in Z(2) for every j.
  [[nodiscard]] bool unimodular_row(std::size_t i) const;
};

/// prod_j mu_j(a_j u + b_j v) == prod_j mu_j(c_j u + d_j v) for all four
/// (u, v) in Z(2)^2.
bool z2_eq1_holds(const Z2Problem& problem);

struct Z2Witness {
  Z2Problem problem;
  std::size_t index;
};

struct PropositionReport {
  std::size_t problems = 0;            ///< problems enumerated
  std::size_t identically_distributed = 0;
  std::size_t checked = 0;             ///< (problem, i) pairs satisfying the row condition
  std::vector<Z2Witness> violations;   ///< q_i not in {0, 1}
};

/// Enumerates every coefficient tuple (lexicographic in a, b, c, d) and every
/// assignment of laws from q_grid (lexicographic) for n = 1..n_max. For each
/// problem satisfying the equation, every i with a unimodular row must have
/// a degenerate law. q_grid must not contain 1/2.
PropositionReport proposition_check(std::size_t n_max, const std::vector<Rational>& q_grid);

/// Same enumeration; returns every (problem, i) with equation satisfied, a
/// unimodular row i and q_i outside {0, 1/2, 1}, in enumeration order.
std::vector<Z2Witness> counterexample_search(std::size_t n_max,
                                             const std::vector<Rational>& q_grid);

std::ostream& operator<<(std::ostream& os, const Z2Problem& p);

}  // namespace rz2::z2
