#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative method failed to converge, or an integer result would overflow.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested item lies beyond the searched range (e.g. a kernel zero past the bracket limit).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Enumeration size, quadrature order, or file I/O exceeds what the lab allows.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace speclab
