#include "lesionfair/error.hpp"

namespace lesionfair {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kImageTooSmall: return "image-too-small";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kDegenerateLabels: return "degenerate-labels";
    case ErrorCode::kNoSkinPixels: return "no-skin-pixels";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kInvalidField: return "invalid-field";
    case ErrorCode::kBadDistribution: return "bad-distribution";
    case ErrorCode::kUnknownPaletteColor: return "unknown-palette-color";
    case ErrorCode::kMissingGroup: return "missing-group";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown-error";
}

}  // namespace lesionfair
