#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hullpeel {

enum class ErrorCode {
  kDegenerateInput,
  kDimensionMismatch,
  kTooFewPoints,
  kEmptyInput,
  kInsufficientSamples,
  kInsufficientProfile,
  kRowCountMismatch,
  kParseError,
  kMissingLabelColumn,
  kNonBinaryLabel,
  kLengthMismatch,
  kSingleClass,
  kBadRadii,
  kInvalidArgument,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

/// Every library failure is reported as an Error carrying a machine-readable
/// code. Parse-style errors also carry the 1-based line number of the input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace hullpeel
