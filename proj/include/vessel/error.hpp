#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vessel {

enum class ErrorCode {
  LengthMismatch,
  BadDims,
  BadSpacing,
  ShapeMismatch,
  SpacingMismatch,
  BadMagic,
  UnsupportedDatatype,
  TruncatedData,
  LabelRange,
  DimsTooLarge,
  SchemaError,
  EmptyInput,
  NegativeRadius,
  PathOutOfBounds,
  SpecInvalid,
  MissingMetric,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

// All domain failures surface as this one exception type; callers branch on
// code() rather than on a class hierarchy.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace vessel
