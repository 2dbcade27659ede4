#pragma once

#include <stdexcept>
#include <string>

namespace cachesched {

// Input violates a modeling rule (wcet > period, WSS > cache, bad flow, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size guard was exceeded: hyper-period, brute-force search
// space, or linearized model variable count.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cachesched
