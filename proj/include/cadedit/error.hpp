#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cadedit {

enum class Errc {
  // cad_seq
  UnknownKeyword,
  OutOfRangeNumber,
  TruncatedSequence,
  EmptyLoop,
  BadEnumLiteral,
  // geometry
  DegenerateLoop,
  SelfIntersecting,
  HoleOutsideBoundary,
  DegenerateExtrusion,
  EmptySolid,
  ZeroAreaViewport,
  InvalidModel,
  // masking
  FillArityMismatch,
  // variation
  NoApplicableEdit,
  NotEnoughVariants,
  EditMismatch,
  // captioning
  BackendUnavailable,
  EmptyCompletion,
  DuplicateTriplet,
  // pipeline
  InvalidInput,
  InconsistentMask,
  LocatingFailed,
  InvalidCandidate,
  UnknownSession,
  // metrics
  EmptyInput,
  ZeroDelta,
  ArityMismatch,
  // io
  IoError,
  FormatError,
};

std::string_view to_string(Errc code);

/// Error carrying a stable machine-readable code. Parser errors also carry
/// the index of the first offending token.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> token_index = std::nullopt)
      : std::runtime_error(message), code_(code), token_index_(token_index) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> token_index() const noexcept { return token_index_; }

 private:
  Errc code_;
  std::optional<std::size_t> token_index_;
};

}  // namespace cadedit
