#include "rz2/z2.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rz2/parallel.hpp"

namespace rz2::z2 {

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Z2Dist::Z2Dist(Rational q_) : q(q_) {
  if (q < Rational(0) || q > Rational(1)) throw std::invalid_argument("Z2Dist: q must lie in [0, 1]");
}

bool Z2Problem::unimodular_row(std::size_t i) const {
  for (std::size_t j = 0; j < size(); ++j) {
    if (((a[i] & d[j]) ^ (b[i] & c[j])) != 1) return false;
  }
  return true;
}

bool z2_eq1_holds(const Z2Problem& problem) {
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      Rational lhs(1), rhs(1);
      for (std::size_t j = 0; j < problem.size(); ++j) {
        lhs *= problem.dists[j].cf((problem.a[j] & u) ^ (problem.b[j] & v));
        rhs *= problem.dists[j].cf((problem.c[j] & u) ^ (problem.d[j] & v));
      }
      if (lhs != rhs) return false;
    }
  }
  return true;
}

namespace {

struct Scan {
  std::size_t problems = 0;
  std::size_t identically_distributed = 0;
  std::size_t checked = 0;
  std::vector<Z2Witness> hits;
};

/// Problem with coefficients taken from `mask`, a_1 in the most
/// significant bit and d_n in the least.
Z2Problem coefficients_from_mask(std::size_t n, std::uint64_t mask) {
  Z2Problem p;
  std::array<std::vector<int>*, 4> lists{&p.a, &p.b, &p.c, &p.d};
  int bit = static_cast<int>(4 * n) - 1;
  for (auto* list : lists) {
    list->resize(n);
    for (std::size_t j = 0; j < n; ++j, --bit) (*list)[j] = static_cast<int>((mask >> bit) & 1u);
  }
  return p;
}

template <typename Flag>
Scan enumerate(std::size_t n_max, const std::vector<Rational>& q_grid, Flag&& flag) {
  Scan total;
  if (q_grid.empty()) return total;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::uint64_t masks = std::uint64_t{1} << (4 * n);
    std::size_t assignments = 1;
    for (std::size_t j = 0; j < n; ++j) assignments *= q_grid.size();

    std::vector<Scan> per_mask(masks);
    parallel_for(masks, [&](std::size_t mask) {
      Scan& scan = per_mask[mask];
      Z2Problem problem = coefficients_from_mask(n, mask);
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < n; ++i) {
        if (problem.unimodular_row(i)) rows.push_back(i);
      }
      for (std::size_t code = 0; code < assignments; ++code) {
        problem.dists.clear();
        std::size_t rest = code;
        std::vector<std::size_t> digits(n);
        for (std::size_t j = n; j-- > 0;) {
          digits[j] = rest % q_grid.size();
          rest /= q_grid.size();
        }
        for (std::size_t j = 0; j < n; ++j) problem.dists.emplace_back(q_grid[digits[j]]);
        ++scan.problems;
        if (!z2_eq1_holds(problem)) continue;
        ++scan.identically_distributed;
        for (std::size_t i : rows) {
          ++scan.checked;
          if (flag(problem.dists[i])) scan.hits.push_back({problem, i});
        }
      }
    });
    for (auto& scan : per_mask) {
      total.problems += scan.problems;
      total.identically_distributed += scan.identically_distributed;
      total.checked += scan.checked;
      for (auto& w : scan.hits) total.hits.push_back(std::move(w));
    }
  }
  return total;
}

}  // namespace

PropositionReport proposition_check(std::size_t n_max, const std::vector<Rational>& q_grid) {
  for (const auto& q : q_grid) {
    if (q == Rational(1, 2)) {
      throw std::invalid_argument("proposition_check: q = 1/2 has a vanishing characteristic function");
    }
  }
  Scan scan = enumerate(n_max, q_grid, [](const Z2Dist& d) { return !d.degenerate(); });
  return {scan.problems, scan.identically_distributed, scan.checked, std::move(scan.hits)};
}

std::vector<Z2Witness> counterexample_search(std::size_t n_max,
                                             const std::vector<Rational>& q_grid) {
  return enumerate(n_max, q_grid, [](const Z2Dist& d) { return !d.in_haar_shifts(); }).hits;
}

std::ostream& operator<<(std::ostream& os, const Z2Problem& p) {
  auto bits = [&os](const std::vector<int>& v) {
    os << '[';
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "," : "") << v[j];
    os << ']';
  };
  os << "q=[";
  for (std::size_t j = 0; j < p.dists.size(); ++j) os << (j ? "," : "") << format_rational(p.dists[j].q);
  os << "] a=";
  bits(p.a);
  os << " b=";
  bits(p.b);
  os << " c=";
  bits(p.c);
  os << " d=";
  bits(p.d);
  return os;
}

}  // namespace rz2::z2
