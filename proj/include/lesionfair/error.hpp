#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lesionfair {

enum class ErrorCode {
  kImageTooSmall,
  kShapeMismatch,
  kInvalidLabel,
  kEmptyGroup,
  kDegenerateLabels,
  kNoSkinPixels,
  kDuplicateId,
  kInvalidField,
  kBadDistribution,
  kUnknownPaletteColor,
  kMissingGroup,
  kInvalidConfig,
  kIo,
};

// Stable kebab-case identifier, e.g. "image-too-small".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lesionfair
