#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace miohint {

// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

class MalformedTargetId : public Error {
 public:
  using Error::Error;
};

class NotInFunction : public Error {
 public:
  using Error::Error;
};

class TargetLineNotFound : public Error {
 public:
  using Error::Error;
};

// A mutation hint addressed a field that does not exist. Carries the field
// names available at the level where resolution failed so the message can be
// fed back to the model.
class NoSuchField : public Error {
 public:
  NoSuchField(std::string msg, std::vector<std::string> available)
      : Error(std::move(msg)), available_fields(std::move(available)) {}
  std::vector<std::string> available_fields;
};

class HintParseError : public Error {
 public:
  using Error::Error;
};

// Backend transport failures. All kinds are retryable; after the retry budget
// is exhausted the last one is surfaced.
class BackendError : public Error {
 public:
  enum class Kind { Timeout, Transport, NonSuccessStatus, MissingTranscript };
  BackendError(Kind k, std::string msg) : Error(std::move(msg)), kind(k) {}
  Kind kind;
};

class BackendConfigError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class BindError : public Error {
 public:
  using Error::Error;
};

class NoEligibleTarget : public Error {
 public:
  using Error::Error;
};

class EmptyPopulation : public Error {
 public:
  using Error::Error;
};

class MalformedTranscript : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace miohint
