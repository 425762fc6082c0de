#pragma once

#include <stdexcept>

namespace rz2 {

/// An engine was called on input that violates one of its hypotheses
/// (for example classification of non-identically distributed forms).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rz2
