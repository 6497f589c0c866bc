#pragma once

#include "lesionfair/color.hpp"
#include "lesionfair/edge.hpp"
#include "lesionfair/image.hpp"

namespace lesionfair {

struct MixupConfig {
  // Weight of the edge image in the final blend.
  double beta = 0.3;
  RedMaskConfig red_mask;
  CannyConfig canny;

  // Throws kInvalidConfig.
  void validate() const;
};

// Intermediate panels of one preprocessing run.
struct PipelineStages {
  RgbImage contrast;
  GrayImage gray;
  EdgeMap edges;
  RgbImage result;
};

// out_c = round((1 - beta) * original_c + beta * 255 * edge), edge broadcast
// to all three channels. Throws kShapeMismatch.
RgbImage mix(const RgbImage& original, const EdgeMap& edges, double beta);

// contrast_augment -> value_channel -> canny -> mix against the original.
PipelineStages run_pipeline(const RgbImage& image, const MixupConfig& cfg);
RgbImage preprocess(const RgbImage& image, const MixupConfig& cfg);

// Renders a binary edge map as 0/255 gray.
GrayImage render_edges(const EdgeMap& edges);

}  // namespace lesionfair
