// Elements, characters and endomorphisms of X = R x Z(2).
//
// The character group of X is again R x Z(2); a character y = (s, l) takes
// the value exp(i s t) (-1)^(k l) at x = (t, k). Every continuous
// endomorphism acts as (t, k) -> (re * t, disc * k) and is self-adjoint, so
// the same Endomorphism value acts on characters.
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>

namespace rz2 {

/// An element of Z(2), stored as 0 or 1.
class Bit {
 public:
  constexpr Bit() = default;
  /// Throws std::invalid_argument unless v is 0 or 1.
  constexpr Bit(int v) : v_(check(v)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] constexpr int value() const { return v_; }
  constexpr explicit operator bool() const { return v_ != 0; }

  friend constexpr Bit operator+(Bit a, Bit b) { return Bit(a.v_ ^ b.v_); }
  friend constexpr Bit operator-(Bit a, Bit b) { return Bit(a.v_ ^ b.v_); }
  friend constexpr Bit operator*(Bit a, Bit b) { return Bit(a.v_ & b.v_); }
  friend constexpr bool operator==(Bit, Bit) = default;

 private:
  static constexpr std::uint8_t check(int v);
  std::uint8_t v_ = 0;
};

struct GroupElement {
  double t = 0.0;
  Bit k;

  friend constexpr GroupElement operator+(const GroupElement& a, const GroupElement& b) {
    return {a.t + b.t, a.k + b.k};
  }
  friend constexpr GroupElement operator-(const GroupElement& a) { return {-a.t, a.k}; }
  friend constexpr GroupElement operator-(const GroupElement& a, const GroupElement& b) {
    return a + (-b);
  }
  friend constexpr bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct Character {
  double s = 0.0;
  Bit l;

  friend constexpr Character operator+(const Character& a, const Character& b) {
    return {a.s + b.s, a.l + b.l};
  }
  friend constexpr Character operator-(const Character& a) { return {-a.s, a.l}; }
  friend constexpr Character operator-(const Character& a, const Character& b) {
    return a + (-b);
  }
  friend constexpr bool operator==(const Character&, const Character&) = default;
};

/// A continuous endomorphism a(t, k) = (re * t, disc * k).
struct Endomorphism {
  double re = 0.0;
  Bit disc;

  static constexpr Endomorphism identity() { return {1.0, 1}; }
  static constexpr Endomorphism zero() { return {0.0, 0}; }

  /// Additive inverse in End(X); the Z(2) part is its own negative.
  friend constexpr Endomorphism operator-(const Endomorphism& a) { return {-a.re, a.disc}; }
  friend constexpr Endomorphism operator+(const Endomorphism& a, const Endomorphism& b) {
    return {a.re + b.re, a.disc + b.disc};
  }
  friend constexpr Endomorphism operator*(const Endomorphism& a, const Endomorphism& b) {
    return {a.re * b.re, a.disc * b.disc};
  }
  friend constexpr bool operator==(const Endomorphism&, const Endomorphism&) = default;
};

/// Tolerance for deciding whether a real multiplier vanishes.
inline constexpr double kZeroTol = 1e-12;

/// The value of character y at x: exp(i s t) * (-1)^(k l).
std::complex<double> pair(const GroupElement& x, const Character& y);

constexpr GroupElement apply(const Endomorphism& a, const GroupElement& x) {
  return {a.re * x.t, a.disc * x.k};
}

/// Action of the adjoint endomorphism on characters (equal to a itself).
constexpr Character apply(const Endomorphism& a, const Character& y) {
  return {a.re * y.s, a.disc * y.l};
}

/// a*d - b*c in End(X).
constexpr Endomorphism combine(const Endomorphism& a, const Endomorphism& d,
                               const Endomorphism& b, const Endomorphism& c) {
  return {a.re * d.re - b.re * c.re, a.disc * d.disc - b.disc * c.disc};
}

/// True iff a is a topological automorphism: re != 0 and disc == 1.
bool is_aut(const Endomorphism& a);

std::ostream& operator<<(std::ostream& os, const GroupElement& x);
std::ostream& operator<<(std::ostream& os, const Character& y);
std::ostream& operator<<(std::ostream& os, const Endomorphism& a);

// ---------------------------------------------------------------------------

constexpr std::uint8_t Bit::check(int v) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument("Z(2) element must be 0 or 1");
  }
  return static_cast<std::uint8_t>(v);
}

}  // namespace rz2
