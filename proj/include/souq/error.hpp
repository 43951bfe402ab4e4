#pragma once

#include <stdexcept>
#include <string>

namespace souq {

/// Failure conditions surfaced by the library. Every thrown SouqError carries
/// one of these codes so callers can react to the exact condition instead of
/// matching message text.
enum class Errc {
  // simplex / distribution construction
  NegativeEntry,
  BadSum,
  TooFewClasses,
  IndexOutOfRange,
  EmptySubset,
  BadWeights,
  BadAlpha,
  // measures
  OutOfRange,
  NotProper,
  // transforms
  NoRoom,
  LeavesSimplex,
  ZeroShift,
  NotZeroSum,
  AlreadyCentered,
  // evaluation
  MissingTruth,
  MissingCohort,
  EmptyInput,
  BadGrid,
  OneCohortOnly,
  // io / cli
  ParseError,
  InconsistentMembers,
  BadProbabilityRow,
  MissingLabel,
  UnknownFamily,
  BadConfig,
  IoFailure,
};

const char* errc_name(Errc code);

class SouqError : public std::runtime_error {
 public:
  SouqError(Errc code, const std::string& message);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace souq
