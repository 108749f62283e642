#ifndef NILMIN_ERRORS_HPP
#define NILMIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nilmin {

// base class for all library errors
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// incompatible or invalid arguments (mismatched tau, bad truncation, ...)
struct parameter_error : error {
  using error::error;
};

// input triple does not satisfy the conformality condition
struct conformality_error : error {
  using error::error;
};

// discarded Laurent tail mass exceeded the loop's tolerance
struct truncation_error : error {
  using error::error;
};

// truncated loop has no usable inverse (singular or ill-conditioned system)
struct noninvertible_error : error {
  using error::error;
};

// Birkhoff factorization failed: the loop is outside the big cell
struct big_cell_error : error {
  using error::error;
};

// grid too small or otherwise unusable for finite differences
struct grid_error : error {
  using error::error;
};

// potential has a pole on the requested integration path
struct pole_error : error {
  using error::error;
};

// a quantity the theory requires to be real (etc.) failed its tolerance
struct consistency_error : error {
  using error::error;
};

// adaptive ODE step shrank below the representable minimum
struct stiffness_error : error {
  using error::error;
};

// malformed configuration or data file
struct parse_error : error {
  using error::error;
};

} // namespace nilmin

#endif
