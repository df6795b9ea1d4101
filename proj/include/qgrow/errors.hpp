#pragma once

#include <stdexcept>
#include <string>

namespace qgrow {

// Degenerate mathematical input (vacuum into photon subtraction, alpha = 0
// cat, heralding probability below cutoff).
class degenerate_input_error : public std::runtime_error {
  public:
    explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime: envelope violation in the rejection sampler,
// zero-probability sample in the likelihood. CLI maps these to exit code 2.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// File I/O and parse failures. CLI maps these to exit code 3.
class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgrow
