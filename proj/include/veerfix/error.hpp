#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace veerfix {

enum class ErrorKind {
  // exactnum
  NotIrreducible,
  NoRootInInterval,
  MultipleRootsInInterval,
  DivisionByZero,
  FieldMismatch,
  Parse,
  // flatsurf
  UnmatchedEdge,
  LengthMismatch,
  NonConvexPolygon,
  GaussBonnetViolation,
  DegenerateInput,
  NotConstantDerivative,
  NotBijective,
  Discontinuous,
  LambdaNotExpanding,
  NotHyperbolic,
  // saddle
  HorizontalOrVertical,
  OverlappingSegments,
  PassesThroughSingularity,
  // veering
  NotNoncrossing,
  NotFlippable,
  NotCrossing,
  WrongOrder,
  // fixcount
  NotFixed,
  PartialProngPermutation,
  // projections
  NoEssentialCrossing,
  NonStabilizing,
  DegenerateCurve,
  // corpus
  NotFilling,
  NotCylinder,
  CorruptDataFile,
  // misc
  Unsupported,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported through this type.
/// `Internal` marks a violated invariant (a bug), everything else is bad input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void check_internal(bool cond, const char* what) {
  if (!cond) fail(ErrorKind::Internal, what);
}

}  // namespace veerfix
