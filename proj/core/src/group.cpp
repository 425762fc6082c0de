#include "rz2/group.hpp"

#include <cmath>
#include <ostream>

namespace rz2 {

std::complex<double> pair(const GroupElement& x, const Character& y) {
  const double sign = (x.k * y.l) ? -1.0 : 1.0;
  return sign * std::polar(1.0, y.s * x.t);
}

bool is_aut(const Endomorphism& a) {
  return std::abs(a.re) > kZeroTol && a.disc.value() == 1;
}

std::ostream& operator<<(std::ostream& os, const GroupElement& x) {
  return os << '(' << x.t << ", " << x.k.value() << ')';
}

std::ostream& operator<<(std::ostream& os, const Character& y) {
  return os << '(' << y.s << ", " << y.l.value() << ')';
}

std::ostream& operator<<(std::ostream& os, const Endomorphism& a) {
  return os << '(' << a.re << ", " << a.disc.value() << ')';
}

}  // namespace rz2
