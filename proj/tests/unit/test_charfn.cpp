#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rz2/charfn.hpp"

using namespace rz2;
using doctest::Approx;

TEST_CASE("cf_eval: examples") {
  const ThetaParams p{1.0, 0.3, 0.5, -0.2, 0.4};
  CHECK(std::abs(cf_eval(p, {0.0, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(cf_eval(p, {0.0, 1}) - 0.4) < 1e-15);
  const ThetaParams q{1.0, 0.0, 0.5, 0.0, 0.5};
  CHECK(std::abs(cf_eval(q, {1.0, 1}) - 0.5 * std::exp(-0.5)) < 1e-15);
}

TEST_CASE("cf_eval_complex: examples") {
  const ThetaParams p{1.0, 0.0, 0.5, 0.0, 0.5};
  CHECK(std::abs(cf_eval_complex(p, 0.0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(cf_eval_complex(p, {0.0, 1.0}, 0) - std::exp(1.0)) < 1e-13);
  const ThetaParams r{0.7, 0.4, 0.3, -1.1, -0.2};
  for (double s : {-3.0, -0.5, 0.0, 1.25, 4.0}) {
    for (int l : {0, 1}) {
      CHECK(std::abs(cf_eval_complex(r, s, l) - cf_eval(r, {s, l})) < 1e-15);
    }
  }
}

TEST_CASE("kappa_bound: examples against numeric minimization") {
  CHECK(kappa_bound(1.0, 0.0, 0.5, 0.0) == Approx(0.7071067812).epsilon(1e-10));
  CHECK(kappa_bound(1.0, 0.0, 0.5, 0.0) ==
        Approx(oracle::min_density_ratio(1.0, 0.0, 0.5, 0.0)).epsilon(1e-10));
  for (double b : {-3.0, 0.0, 2.5}) {
    CHECK(kappa_bound(1.0, b, 0.5, b) == Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
  const double expected = std::sqrt(0.5) * std::exp(-0.25);
  CHECK(kappa_bound(2.0, 1.0, 1.0, 0.0) == Approx(expected).epsilon(1e-14));
  CHECK(kappa_bound(2.0, 1.0, 1.0, 0.0) ==
        Approx(oracle::min_density_ratio(2.0, 1.0, 1.0, 0.0)).epsilon(1e-10));
  CHECK_THROWS_AS(kappa_bound(1.0, 0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kappa_bound(1.0, 0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("is_probability: examples") {
  auto m = is_probability({1.0, 0.0, 0.5, 0.0, 0.7});
  CHECK(m.probability);
  CHECK(m.label == ClassLabel::ThetaProper);
  CHECK(oracle::min_fiber_density({1.0, 0.0, 0.5, 0.0, 0.7}, 4001) >= 0.0);

  m = is_probability({1.0, 0.0, 0.5, 0.0, 0.8});
  CHECK_FALSE(m.probability);
  CHECK(m.label == ClassLabel::SignedOnly);
  CHECK(oracle::min_fiber_density({1.0, 0.0, 0.5, 0.0, 0.8}, 4001) < 0.0);

  m = is_probability({1.0, 2.0, 1.0, 2.0, 1.0});
  CHECK(m.probability);
  CHECK(m.label == ClassLabel::GammaX);

  m = is_probability({1.0, 2.0, 1.0, 2.0, -1.0});
  CHECK(m.label == ClassLabel::GammaX);
  m = is_probability({1.0, 2.0, 1.0, 2.0, 0.3});
  CHECK(m.label == ClassLabel::GammaRTimesM1Z2);
  CHECK_FALSE(is_probability({1.0, 2.0, 1.0, 2.5, 0.3}).probability);
  CHECK_FALSE(is_probability({1.0, 0.0, 1.0, 0.0, 1.01}).probability);
  CHECK_FALSE(is_probability({0.5, 0.0, 1.0, 0.0, 0.1}).probability);
  CHECK(is_probability(degenerate_at_zero()).label == ClassLabel::GammaX);
  CHECK(is_probability(haar_z2()).label == ClassLabel::GammaRTimesM1Z2);
}

TEST_CASE("is_probability: kappa = 0 with sigma_p < sigma is excluded") {
  CHECK_FALSE(is_probability({1.0, 0.0, 0.5, 0.0, 0.0}).probability);
}

TEST_CASE("is_probability: labels are exclusive and consistent with membership") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto p = oracle::random_theta(rng);
    const auto m = is_probability(p);
    CHECK(m.probability == (m.label != ClassLabel::SignedOnly));
  }
}

TEST_CASE("fiber_density: examples") {
  const ThetaParams flat{0.8, 0.5, 0.8, 0.5, 0.0};
  for (double t : {-2.0, 0.0, 0.5, 3.0}) {
    CHECK(fiber_density(flat, 0, t) == Approx(fiber_density(flat, 1, t)));
    CHECK(fiber_density(flat, 0, t) == Approx(0.5 * oracle::normal_pdf(0.5, 1.6, t)));
  }

  const ThetaParams edge{1.0, 0.0, 0.5, 0.0, std::sqrt(0.5)};
  double lo = 1.0;
  for (int i = 0; i <= 20000; ++i) lo = std::min(lo, fiber_density(edge, 1, -10.0 + 20.0 * i / 20000));
  CHECK(std::abs(lo) < 1e-12);

  const ThetaParams p{1.3, -0.4, 0.6, 0.2, 0.3};
  CHECK(oracle::fiber_integral(p, 0) + oracle::fiber_integral(p, 1) == Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(fiber_density({0.0, 0.0, 0.0, 0.0, 1.0}, 0, 0.0), AtomicFiberError);
  CHECK_THROWS_AS(fiber_density({1.0, 0.0, 0.0, 0.0, 0.5}, 1, 0.0), AtomicFiberError);
}

TEST_CASE("fiber_density agrees with the oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::random_theta(rng);
    for (double t : {-3.0, -1.0, 0.0, 0.7, 2.0}) {
      CHECK(fiber_density(p, 0, t) == Approx(oracle::fiber_density(p, 0, t)).epsilon(1e-12));
      CHECK(fiber_density(p, 1, t) == Approx(oracle::fiber_density(p, 1, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fiber_mass: examples against quadrature") {
  const ThetaParams half{1.0, 0.0, 0.5, 0.0, 0.5};
  CHECK(fiber_mass(half, 0) == Approx(0.75));
  CHECK(fiber_mass(half, 1) == Approx(0.25));
  CHECK(oracle::fiber_integral(half, 0) == Approx(0.75).epsilon(1e-10));
  CHECK(oracle::fiber_integral(half, 1) == Approx(0.25).epsilon(1e-10));
  const ThetaParams gauss{1.0, 0.0, 1.0, 0.0, 1.0};
  CHECK(fiber_mass(gauss, 0) == 1.0);
  CHECK(fiber_mass(gauss, 1) == 0.0);
  const ThetaParams even{1.0, 0.0, 1.0, 0.0, 0.0};
  CHECK(fiber_mass(even, 0) == 0.5);
  CHECK(fiber_mass(even, 1) == 0.5);
}

TEST_CASE("convolve / reflect / symmetrize: examples") {
  const ThetaParams p{1.0, 0.0, 0.5, 0.0, 0.5};
  CHECK(convolve(p, degenerate_at_zero()) == p);
  CHECK(convolve(p, p) == ThetaParams{2.0, 0.0, 1.0, 0.0, 0.25});
  CHECK(convolve(p, haar_z2()).kappa == 0.0);

  const ThetaParams q{0.9, 0.6, 0.4, -0.3, -0.35};
  CHECK(reflect(ThetaParams{0.9, 0.0, 0.4, 0.0, 0.2}) == ThetaParams{0.9, 0.0, 0.4, 0.0, 0.2});
  CHECK(reflect(reflect(q)) == q);
  CHECK(symmetrize(q) == ThetaParams{1.8, 0.0, 0.8, 0.0, q.kappa * q.kappa});
  for (double s : {-2.0, 0.3, 1.7}) {
    for (int l : {0, 1}) {
      CHECK(std::abs(cf_eval(reflect(q), {s, l}) - std::conj(cf_eval(q, {s, l}))) < 1e-15);
    }
  }
}

TEST_CASE("property: normalization, modulus and Hermitian symmetry") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::random_probability_theta(rng);
    REQUIRE(is_probability(p).probability);
    CHECK(std::abs(cf_eval(p, {0.0, 0}) - 1.0) < 1e-15);
    for (int j = 0; j <= 200; ++j) {
      const double s = -50.0 + 0.5 * j;
      for (int l : {0, 1}) {
        const auto v = cf_eval(p, {s, l});
        CHECK(std::abs(v) <= 1.0 + 1e-15);
        CHECK(std::abs(cf_eval(p, {-s, l}) - std::conj(v)) < 1e-15);
      }
    }
  }
}

TEST_CASE("property: convolution multiplies characteristic functions") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto p = oracle::random_probability_theta(rng);
    const auto q = oracle::random_probability_theta(rng);
    const auto pq = convolve(p, q);
    CHECK(is_probability(pq).probability);
    for (int j = 0; j <= 100; ++j) {
      const double s = -5.0 + 0.1 * j;
      for (int l : {0, 1}) {
        CHECK(std::abs(cf_eval(pq, {s, l}) - cf_eval(p, {s, l}) * cf_eval(q, {s, l})) < 1e-12);
      }
    }
  }
}

TEST_CASE("property: Lemma-7 style circle inequality") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto p = oracle::random_probability_theta(rng);
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
      CHECK(circle_max_modulus(p, 1, r, 360) <= circle_max_modulus(p, 0, r, 360) + 1e-9);
    }
  }
}

TEST_CASE("circle_max_modulus matches a direct scan") {
  const ThetaParams p{0.7, 0.5, 0.2, -0.4, 0.3};
  double direct = 0.0;
  for (int i = 0; i < 360; ++i) {
    const double th = 2.0 * std::numbers::pi * i / 360;
    const std::complex<double> s = std::polar(2.0, th);
    const auto v = p.kappa * std::exp(-p.sigma_p * s * s + std::complex<double>(0.0, p.beta_p) * s);
    direct = std::max(direct, std::abs(v));
  }
  CHECK(circle_max_modulus(p, 1, 2.0, 360) == Approx(direct).epsilon(1e-12));
}
