#pragma once

#include <stdexcept>
#include <string>

namespace srta {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector/problem sizes do not agree.
struct dimension_error : error {
  using error::error;
};

/// Exact quarter-unit arithmetic would overflow or lose exactness.
struct overflow_error : error {
  using error::error;
};

/// Intercepted data cannot be explained by the assumed generator.
struct inconsistency_error : error {
  using error::error;
};

/// File or serialization failure.
struct io_error : error {
  using error::error;
};

}  // namespace srta
