#pragma once
#include <stdexcept>
#include <string>

namespace polymer {

// Out-of-range model or sampler parameters.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested moment does not exist (theta <= k and friends).
struct MomentDivergenceError : std::domain_error {
  using std::domain_error::domain_error;
};

// Enumeration guards (brute force, chaos series).
struct InstanceTooLargeError : std::length_error {
  using std::length_error::length_error;
};

// Lattice/grid coordinates outside the stored window.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace polymer
