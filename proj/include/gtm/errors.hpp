#pragma once

#include <stdexcept>
#include <string>

namespace gtm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters or incompatible model/graph pairing.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A message bound to an edge type would land past the end of the message space,
/// or two (clause, edge type) pairs end up on identical bit sets.
class BindingOverflowError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

class AlreadyRegisteredError : public Error {
 public:
  using Error::Error;
};

/// Malformed or empty input data (corpora, dataset parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A model file that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gtm
