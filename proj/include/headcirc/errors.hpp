#pragma once

#include <stdexcept>
#include <string>

namespace headcirc {

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParameterError : std::runtime_error {
  explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularityError : std::runtime_error {
  explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateConductivityError : std::runtime_error {
  explicit DegenerateConductivityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitError : std::runtime_error {
  explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationError : std::runtime_error {
  explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SweepError : std::runtime_error {
  explicit SweepError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExtrapolationError : std::runtime_error {
  explicit ExtrapolationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExportError : std::runtime_error {
  explicit ExportError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StateError : std::runtime_error {
  explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace headcirc
