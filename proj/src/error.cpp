#include "bloch/error.hpp"

namespace bloch {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonMonic: return "NonMonic";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::DetectedReducible: return "DetectedReducible";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::RootFindingFailed: return "RootFindingFailed";
    case Errc::DegenerateShape: return "DegenerateShape";
    case Errc::NotDistinct: return "NotDistinct";
    case Errc::DegenerateFiveTerm: return "DegenerateFiveTerm";
    case Errc::RequiresExactField: return "RequiresExactField";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::OpenFace: return "OpenFace";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::JacobianSingular: return "JacobianSingular";
    case Errc::Diverged: return "Diverged";
    case Errc::DegeneratedToFlat: return "DegeneratedToFlat";
    case Errc::NotFilled: return "NotFilled";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::DegenerateSimplex: return "DegenerateSimplex";
    case Errc::NotAFiveTermConfiguration: return "NotAFiveTermConfiguration";
    case Errc::InvalidPolyhedron: return "InvalidPolyhedron";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bloch
