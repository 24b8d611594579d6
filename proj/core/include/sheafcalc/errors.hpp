#pragma once

#include <stdexcept>
#include <string>

namespace sheafcalc {

/// Machine-readable failure categories. The CLI maps these onto exit codes.
enum class ErrorCode {
  DuplicateId,
  UnknownVertex,
  UnknownEdge,
  ExtraSelfLoop,
  CapacityExceeded,
  InvalidMorphism,
  ShapeMismatch,
  MissingIncidenceMap,
  ExtraMap,
  NotAThetaImage,
  NotInvertible,
  RankMismatch,
  NotSimpleDigraph,
  NotEtaleDirectedCover,
  UnknownClique,
  IncompatiblePair,
  ParseError,
  UsageError,
  PreconditionFailed,
  NonConvergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::ExtraSelfLoop: return "ExtraSelfLoop";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::InvalidMorphism: return "InvalidMorphism";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MissingIncidenceMap: return "MissingIncidenceMap";
    case ErrorCode::ExtraMap: return "ExtraMap";
    case ErrorCode::NotAThetaImage: return "NotAThetaImage";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotSimpleDigraph: return "NotSimpleDigraph";
    case ErrorCode::NotEtaleDirectedCover: return "NotEtaleDirectedCover";
    case ErrorCode::UnknownClique: return "UnknownClique";
    case ErrorCode::IncompatiblePair: return "IncompatiblePair";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace sheafcalc
