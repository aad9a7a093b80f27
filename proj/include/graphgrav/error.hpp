#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphgrav {

enum class Errc {
  Disconnected,
  NonpositiveLength,
  DuplicateEdge,
  SelfLoop,
  UnknownVertex,
  DisconnectedRegion,
  EmptyRegion,
  TOutOfRange,
  UnbalancedMass,
  NotAnEdge,
  NoConvergence,
  NotATree,
  BoundaryEdge,
  NonpositiveScale,
  RatioNotGreaterThanOne,
  QNotOdd,
  NegativeDiscriminant,
  NonUniqueInwardEdge,
  NonpositiveInput,
  NotHexRegion,
  NotComplete,
  BadParams,
  TooLarge,
  NotPerfect,
  InvalidRatioChain,
  InconsistentParams,
  SingularJacobian,
  NoFreeEdges,
  Parse,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::Disconnected: return "Disconnected";
    case Errc::NonpositiveLength: return "NonpositiveLength";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::DisconnectedRegion: return "DisconnectedRegion";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::TOutOfRange: return "TOutOfRange";
    case Errc::UnbalancedMass: return "UnbalancedMass";
    case Errc::NotAnEdge: return "NotAnEdge";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotATree: return "NotATree";
    case Errc::BoundaryEdge: return "BoundaryEdge";
    case Errc::NonpositiveScale: return "NonpositiveScale";
    case Errc::RatioNotGreaterThanOne: return "RatioNotGreaterThanOne";
    case Errc::QNotOdd: return "QNotOdd";
    case Errc::NegativeDiscriminant: return "NegativeDiscriminant";
    case Errc::NonUniqueInwardEdge: return "NonUniqueInwardEdge";
    case Errc::NonpositiveInput: return "NonpositiveInput";
    case Errc::NotHexRegion: return "NotHexRegion";
    case Errc::NotComplete: return "NotComplete";
    case Errc::BadParams: return "BadParams";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotPerfect: return "NotPerfect";
    case Errc::InvalidRatioChain: return "InvalidRatioChain";
    case Errc::InconsistentParams: return "InconsistentParams";
    case Errc::SingularJacobian: return "SingularJacobian";
    case Errc::NoFreeEdges: return "NoFreeEdges";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() is what callers
// branch on, what() carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace graphgrav
