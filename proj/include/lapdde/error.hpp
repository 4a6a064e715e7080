#pragma once

#include <stdexcept>
#include <string>

namespace lapdde {

// Rejected input: malformed configuration, violated invariant, bad parameter.
// Messages are path-qualified where the input came from a document.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query outside the time range an object covers.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace lapdde
