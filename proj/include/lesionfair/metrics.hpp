#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lesionfair/image.hpp"
#include "lesionfair/skintone.hpp"

namespace lesionfair {

enum class DiseaseClass { kNO = 0, kEM = 1, kHZ = 2, kTC = 3 };
inline constexpr int kNumDiseaseClasses = 4;

std::string_view class_name(DiseaseClass c);
std::optional<DiseaseClass> parse_class(std::string_view text);

struct LabeledPrediction {
  std::string sample_id;
  DiseaseClass true_label = DiseaseClass::kNO;
  DiseaseClass predicted_label = DiseaseClass::kNO;
  // Indexed by DiseaseClass.
  std::array<double, kNumDiseaseClasses> scores{};
  SkinGroup group = SkinGroup::kLight;
};

// ---------------------------------------------------------------------------
// Classification utility.

// Fraction correct over the predictions in `subset` (all when nullopt).
// Throws kEmptyGroup.
double accuracy(std::span<const LabeledPrediction> preds,
                std::optional<SkinGroup> subset = std::nullopt);

struct ScoredLabel {
  double score = 0.0;
  bool positive = false;
};

// Trapezoidal area under the ROC curve. Tied scores cross the threshold
// together, which makes the result equal to the Mann-Whitney statistic with
// half credit for ties. Throws kDegenerateLabels unless both classes occur.
double roc_auc(std::span<const ScoredLabel> samples);

enum class AucAveraging { kMacro, kMicro };

std::string_view averaging_name(AucAveraging averaging);
std::optional<AucAveraging> parse_averaging(std::string_view text);

struct AucResult {
  double value = 0.0;
  std::vector<std::string> warnings;
};

// One-vs-rest AUC over the four disease classes. Macro averaging skips
// classes without both positives and negatives in the subset (with a
// warning); micro pools every (score, is-true-class) pair.
// Throws kEmptyGroup or kDegenerateLabels.
AucResult multiclass_auc(std::span<const LabeledPrediction> preds,
                         std::optional<SkinGroup> subset = std::nullopt,
                         AucAveraging averaging = AucAveraging::kMacro);

// ---------------------------------------------------------------------------
// Fairness arithmetic.

// alpha * (gap_b - gap_d) + (1 - alpha) * (value_d - value_b). This is the
// shared affine form behind CAI (accuracy) and CAUCI (AUC).
double joint_fairness_score(double alpha, double value_b, double gap_b,
                            double value_d, double gap_d);

inline double cai(double alpha, double acc_b, double gap_b, double acc_d, double gap_d) {
  return joint_fairness_score(alpha, acc_b, gap_b, acc_d, gap_d);
}
inline double cauci(double alpha, double auc_b, double gap_b, double auc_d, double gap_d) {
  return joint_fairness_score(alpha, auc_b, gap_b, auc_d, gap_d);
}

inline constexpr double kDefaultZ = 1.96;

// Normal-approximation margin z * sqrt(p (1 - p) / n), in percentage points.
// Throws kEmptyGroup when n == 0.
double margin_of_error(double p, std::size_t n, double z = kDefaultZ);

// Margin of a difference of two independent proportions, in percentage points.
double gap_margin_of_error(double p1, std::size_t n1, double p2, std::size_t n2,
                           double z = kDefaultZ);

// ---------------------------------------------------------------------------
// Segmentation.

inline constexpr int kNumMaskClasses = 3;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

// One-vs-rest pixel counts for class_id. Throws kShapeMismatch or
// kInvalidLabel (pixel outside {0, 1, 2}).
ConfusionCounts seg_confusion(const LabelMask& pred, const LabelMask& gt, int class_id);

struct OverlapScore {
  double value = 0.0;
  // tp + fp + fn == 0: the class is absent from both masks and the score is
  // defined as 1.
  bool class_absent = false;
};

OverlapScore jaccard(const ConfusionCounts& c);
OverlapScore dice(const ConfusionCounts& c);

// ---------------------------------------------------------------------------
// Reports.

struct GroupValue {
  double value = 0.0;
  std::size_t n = 0;
  std::optional<double> margin;
};

struct GroupedMetric {
  double overall = 0.0;
  std::optional<double> margin;
  std::map<SkinGroup, GroupValue> per_group;
  // |ls - ds|; present only when both groups have a value.
  std::optional<double> gap;
  std::optional<double> gap_margin;
  // Rawlsian worst-group value, taken as the ds group.
  std::optional<double> min_ds;
};

// Accuracy values are percentages; AUC values are fractions. Margins share
// the unit of the value they qualify.
struct ClassificationReport {
  std::size_t n = 0;
  std::optional<GroupedMetric> accuracy;
  std::optional<GroupedMetric> auc;
  std::string auc_averaging = "macro";
  std::vector<std::string> warnings;
};

ClassificationReport classification_report(std::span<const LabeledPrediction> preds,
                                           AucAveraging averaging = AucAveraging::kMacro,
                                           double z = kDefaultZ);

struct SegSample {
  std::string sample_id;
  LabelMask pred;
  LabelMask gt;
  std::optional<SkinGroup> group;
};

struct SegImageScores {
  std::string sample_id;
  std::optional<SkinGroup> group;
  std::array<double, kNumMaskClasses> jaccard{};
  std::array<double, kNumMaskClasses> dice{};
  std::array<bool, kNumMaskClasses> class_absent{};
  double mean_jaccard = 0.0;
  double mean_dice = 0.0;
};

struct SegmentationReport {
  std::size_t n = 0;
  GroupedMetric jaccard;
  GroupedMetric dice;
  std::vector<SegImageScores> images;
  std::vector<std::string> warnings;
};

// Per image: J and D for each class, averaged over the three classes.
// Dataset and group values are means of the per-image means; margins are
// z * s / sqrt(n). Throws kEmptyGroup on empty input.
SegmentationReport seg_report(std::span<const SegSample> samples, double z = kDefaultZ);

// ---------------------------------------------------------------------------
// Baseline vs debiased comparison.

enum class MetricKind { kAccuracy, kAuc };
std::string_view metric_kind_name(MetricKind kind);

struct FairnessComparison {
  double alpha = 0.0;
  MetricKind metric_kind = MetricKind::kAccuracy;
  double baseline_value = 0.0;
  double baseline_gap = 0.0;
  double debiased_value = 0.0;
  double debiased_gap = 0.0;
  double score = 0.0;
};

struct MetricSideBySide {
  MetricKind metric_kind = MetricKind::kAccuracy;
  double baseline_value = 0.0;
  double debiased_value = 0.0;
  std::optional<double> baseline_gap;
  std::optional<double> debiased_gap;
  std::optional<double> baseline_min_ds;
  std::optional<double> debiased_min_ds;
};

struct ComparisonResult {
  std::vector<double> alphas;
  // CAI entries first (one per alpha), then CAUCI entries.
  std::vector<FairnessComparison> comparisons;
  std::vector<MetricSideBySide> side_by_side;
  std::vector<std::string> warnings;
};

// Throws kInvalidConfig when an alpha lies outside [0, 1].
ComparisonResult compare(const ClassificationReport& baseline,
                         const ClassificationReport& debiased,
                         std::span<const double> alphas);

}  // namespace lesionfair
