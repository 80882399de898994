#include "veerfix/error.hpp"

namespace veerfix {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NoRootInInterval: return "NoRootInInterval";
    case ErrorKind::MultipleRootsInInterval: return "MultipleRootsInInterval";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::UnmatchedEdge: return "UnmatchedEdge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonConvexPolygon: return "NonConvexPolygon";
    case ErrorKind::GaussBonnetViolation: return "GaussBonnetViolation";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NotConstantDerivative: return "NotConstantDerivative";
    case ErrorKind::NotBijective: return "NotBijective";
    case ErrorKind::Discontinuous: return "Discontinuous";
    case ErrorKind::LambdaNotExpanding: return "LambdaNotExpanding";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::HorizontalOrVertical: return "HorizontalOrVertical";
    case ErrorKind::OverlappingSegments: return "OverlappingSegments";
    case ErrorKind::PassesThroughSingularity: return "PassesThroughSingularity";
    case ErrorKind::NotNoncrossing: return "NotNoncrossing";
    case ErrorKind::NotFlippable: return "NotFlippable";
    case ErrorKind::NotCrossing: return "NotCrossing";
    case ErrorKind::WrongOrder: return "WrongOrder";
    case ErrorKind::NotFixed: return "NotFixed";
    case ErrorKind::PartialProngPermutation: return "PartialProngPermutation";
    case ErrorKind::NoEssentialCrossing: return "NoEssentialCrossing";
    case ErrorKind::NonStabilizing: return "NonStabilizing";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::NotFilling: return "NotFilling";
    case ErrorKind::NotCylinder: return "NotCylinder";
    case ErrorKind::CorruptDataFile: return "CorruptDataFile";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace veerfix
