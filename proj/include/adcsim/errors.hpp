#pragma once

#include <stdexcept>

namespace adcsim {

// Bad argument values: non-finite voltages, size or range violations.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Pipeline state does not match the config driving it.
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// cycles and n_fft share a factor; the tone would not land in a single bin.
class CoherenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Converter or signal carries no usable information: stuck output code,
// zero transition span, silent stimulus.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration file or schema problems.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adcsim
