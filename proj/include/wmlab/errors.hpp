#pragma once

#include <stdexcept>
#include <string>

namespace wmlab {

// Input that is too large for the in-memory exhaustive representations.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or domain mismatch between arguments (dimensions, coordinates).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value violates a type invariant (non-finite entries, non-injective model, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation refuses to answer because its preconditions do not hold.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something that theory says cannot happen did happen.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wmlab
