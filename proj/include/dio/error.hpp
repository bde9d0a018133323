#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dio {

/// Machine-readable error categories. The CLI maps these onto exit codes
/// and the `error` field of its error JSON.
enum class ErrorKind {
  kInvalidArgument,
  kInfeasiblePoint,
  kSingularHessian,
  kSingularHessianEstimate,
  kStepFailed,
  kDisconnectedGraph,
  kInfeasibleStart,
  kEmptyFeasibleSet,
  kGainConditionViolated,
  kValidation,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define DIO_DEFINE_ERROR(Name, Kind)                    \
  class Name : public Error {                           \
   public:                                              \
    explicit Name(const std::string& what)              \
        : Error(ErrorKind::Kind, what) {}               \
  };

DIO_DEFINE_ERROR(InvalidArgument, kInvalidArgument)
DIO_DEFINE_ERROR(InfeasiblePoint, kInfeasiblePoint)
DIO_DEFINE_ERROR(SingularHessian, kSingularHessian)
DIO_DEFINE_ERROR(SingularHessianEstimate, kSingularHessianEstimate)
DIO_DEFINE_ERROR(DisconnectedGraph, kDisconnectedGraph)
DIO_DEFINE_ERROR(InfeasibleStart, kInfeasibleStart)
DIO_DEFINE_ERROR(EmptyFeasibleSet, kEmptyFeasibleSet)
DIO_DEFINE_ERROR(GainConditionViolated, kGainConditionViolated)
DIO_DEFINE_ERROR(ValidationError, kValidation)
DIO_DEFINE_ERROR(IoError, kIo)

#undef DIO_DEFINE_ERROR

}  // namespace dio
