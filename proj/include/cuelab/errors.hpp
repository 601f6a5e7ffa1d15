#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cuelab {

enum class ErrorKind {
  InvalidDimension,
  InvalidArgument,
  SingularPoint,
  NumericalFailure,
  OutOfDomain,
  InvalidEnsemble,
  DegenerateCombination,
  IllConditionedContour,
  InvalidConfig,
  Usage,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::InvalidEnsemble: return "invalid-ensemble";
    case ErrorKind::DegenerateCombination: return "degenerate-combination";
    case ErrorKind::IllConditionedContour: return "ill-conditioned-contour";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cuelab
