#pragma once

#include <stdexcept>
#include <string>

namespace mcsense {

enum class ErrorKind {
  InconsistentDimensions,
  OccupancyOutOfRange,
  InvalidSpec,
  IndexOutOfRange,
  LengthNotMultipleOfL,
  InvalidPattern,
  EmptySet,
  RankDeficient,
  SearchSpaceTooLarge,
  OutOfDomain,
  InsufficientSamples,
  BadFormat,
  LengthMismatch,
  RateMismatch,
  EmptyTable,
  InvalidConfig,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mcsense
