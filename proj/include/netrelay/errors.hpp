#pragma once

#include <stdexcept>
#include <string>

namespace netrelay {

// Operand shapes disagree (vector lengths, matrix dimensions, block sizes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inserting an entry that is already present.
class DuplicateEntryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A randomized matrix construction exhausted its retry budget.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parity-check matrix has full column rank, leaving a zero-dimensional code.
class DegenerateCodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent topology or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netrelay
