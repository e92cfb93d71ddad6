#pragma once

#include <stdexcept>
#include <string>

namespace biaslens {

// Bad user input: malformed config/labels/flags. Maps to CLI exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Environment or numerical failure at run time. Maps to CLI exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : RuntimeFailure {
  using RuntimeFailure::RuntimeFailure;
};

struct ProviderError : RuntimeFailure {
  using RuntimeFailure::RuntimeFailure;
};

struct FitError : RuntimeFailure {
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace biaslens
