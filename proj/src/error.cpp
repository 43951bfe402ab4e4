#include "souq/error.hpp"

namespace souq {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::BadSum: return "BadSum";
    case Errc::TooFewClasses: return "TooFewClasses";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::BadWeights: return "BadWeights";
    case Errc::BadAlpha: return "BadAlpha";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NotProper: return "NotProper";
    case Errc::NoRoom: return "NoRoom";
    case Errc::LeavesSimplex: return "LeavesSimplex";
    case Errc::ZeroShift: return "ZeroShift";
    case Errc::NotZeroSum: return "NotZeroSum";
    case Errc::AlreadyCentered: return "AlreadyCentered";
    case Errc::MissingTruth: return "MissingTruth";
    case Errc::MissingCohort: return "MissingCohort";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BadGrid: return "BadGrid";
    case Errc::OneCohortOnly: return "OneCohortOnly";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistentMembers: return "InconsistentMembers";
    case Errc::BadProbabilityRow: return "BadProbabilityRow";
    case Errc::MissingLabel: return "MissingLabel";
    case Errc::UnknownFamily: return "UnknownFamily";
    case Errc::BadConfig: return "BadConfig";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

SouqError::SouqError(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw SouqError(code, message); }

}  // namespace souq
