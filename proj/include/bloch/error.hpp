#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bloch {

enum class Errc {
  NonMonic,
  NotSquarefree,
  DetectedReducible,
  FieldMismatch,
  DivisionByZero,
  RootFindingFailed,
  DegenerateShape,
  NotDistinct,
  DegenerateFiveTerm,
  RequiresExactField,
  SyntaxError,
  DimensionMismatch,
  OpenFace,
  NotIntegral,
  NotCoprime,
  RankDeficient,
  JacobianSingular,
  Diverged,
  DegeneratedToFlat,
  NotFilled,
  Inconsistent,
  DegenerateSimplex,
  NotAFiveTermConfiguration,
  InvalidPolyhedron,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bloch
