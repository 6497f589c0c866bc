#include "lesionfair/mixup.hpp"

namespace lesionfair {

void MixupConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "beta must lie in [0, 1]");
  }
  red_mask.validate();
  canny.validate();
}

RgbImage mix(const RgbImage& original, const EdgeMap& edges, double beta) {
  if (!original.same_shape(edges)) {
    throw Error(ErrorCode::kShapeMismatch, "edge map and image differ in size");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "beta must lie in [0, 1]");
  }
  RgbImage out(original.width(), original.height());
  const double keep = 1.0 - beta;
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      const double edge = edges.at(x, y) ? beta * 255.0 : 0.0;
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = saturate_u8(keep * original.at(x, y, c) + edge);
      }
    }
  }
  return out;
}

PipelineStages run_pipeline(const RgbImage& image, const MixupConfig& cfg) {
  cfg.validate();
  PipelineStages stages;
  stages.contrast = contrast_augment(image, cfg.red_mask);
  stages.gray = value_channel(to_hsv(stages.contrast));
  stages.edges = canny(stages.gray, cfg.canny);
  stages.result = mix(image, stages.edges, cfg.beta);
  return stages;
}

RgbImage preprocess(const RgbImage& image, const MixupConfig& cfg) {
  return run_pipeline(image, cfg).result;
}

GrayImage render_edges(const EdgeMap& edges) {
  GrayImage out(edges.width(), edges.height());
  auto src = edges.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
  return out;
}

}  // namespace lesionfair
