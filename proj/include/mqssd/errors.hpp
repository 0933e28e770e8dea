#pragma once

#include <stdexcept>

namespace mqssd {

// Input data violates a documented schema or is insufficient for the
// requested computation. The CLI maps this to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem or device failure. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mqssd
