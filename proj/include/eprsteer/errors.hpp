#pragma once

#include <stdexcept>
#include <string>

namespace eprsteer {

// Dimension cap exceeded or an enumeration grown past its supported size.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Precondition on an argument violated (out-of-range parameter, bad index set).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Result would be numerically meaningless (e.g. complex expectation of a
// Hermitian observable).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroProbabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A witness whose normalisation vanishes, e.g. S3 with J = 0.
class UndefinedWitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eprsteer
