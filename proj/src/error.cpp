#include "cadedit/error.hpp"

namespace cadedit {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnknownKeyword: return "UnknownKeyword";
    case Errc::OutOfRangeNumber: return "OutOfRangeNumber";
    case Errc::TruncatedSequence: return "TruncatedSequence";
    case Errc::EmptyLoop: return "EmptyLoop";
    case Errc::BadEnumLiteral: return "BadEnumLiteral";
    case Errc::DegenerateLoop: return "DegenerateLoop";
    case Errc::SelfIntersecting: return "SelfIntersecting";
    case Errc::HoleOutsideBoundary: return "HoleOutsideBoundary";
    case Errc::DegenerateExtrusion: return "DegenerateExtrusion";
    case Errc::EmptySolid: return "EmptySolid";
    case Errc::ZeroAreaViewport: return "ZeroAreaViewport";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::FillArityMismatch: return "FillArityMismatch";
    case Errc::NoApplicableEdit: return "NoApplicableEdit";
    case Errc::NotEnoughVariants: return "NotEnoughVariants";
    case Errc::EditMismatch: return "EditMismatch";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::EmptyCompletion: return "EmptyCompletion";
    case Errc::DuplicateTriplet: return "DuplicateTriplet";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::InconsistentMask: return "InconsistentMask";
    case Errc::LocatingFailed: return "LocatingFailed";
    case Errc::InvalidCandidate: return "InvalidCandidate";
    case Errc::UnknownSession: return "UnknownSession";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ZeroDelta: return "ZeroDelta";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::IoError: return "IoError";
    case Errc::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace cadedit
