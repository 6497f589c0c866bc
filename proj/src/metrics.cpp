#include "lesionfair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lesionfair {
namespace {

constexpr std::array<std::string_view, kNumDiseaseClasses> kClassNames{"NO", "EM", "HZ",
                                                                        "TC"};

bool selected(const LabeledPrediction& p, std::optional<SkinGroup> subset) {
  return !subset || p.group == *subset;
}

std::string subset_label(std::optional<SkinGroup> subset) {
  return subset ? std::string(group_name(*subset)) : std::string("all");
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

// Mean and margin of per-image scores, split by group.
GroupedMetric summarize_scores(const std::vector<SegImageScores>& images,
                               double SegImageScores::*field, double z,
                               bool both_groups) {
  GroupedMetric metric;
  std::vector<double> all;
  std::map<SkinGroup, std::vector<double>> by_group;
  for (const SegImageScores& img : images) {
    all.push_back(img.*field);
    if (img.group) by_group[*img.group].push_back(img.*field);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  metric.overall = mean(all);
  metric.margin = z * sample_stddev(all) / std::sqrt(static_cast<double>(all.size()));
  for (const auto& [group, values] : by_group) {
    metric.per_group[group] = {
        mean(values), values.size(),
        z * sample_stddev(values) / std::sqrt(static_cast<double>(values.size()))};
  }
  if (both_groups) {
    const GroupValue& ls = metric.per_group.at(SkinGroup::kLight);
    const GroupValue& ds = metric.per_group.at(SkinGroup::kDark);
    metric.gap = std::fabs(ls.value - ds.value);
    metric.gap_margin = std::hypot(*ls.margin, *ds.margin);
  }
  if (auto it = metric.per_group.find(SkinGroup::kDark); it != metric.per_group.end()) {
    metric.min_ds = it->second.value;
  }
  return metric;
}

}  // namespace

std::string_view class_name(DiseaseClass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<DiseaseClass> parse_class(std::string_view text) {
  for (int i = 0; i < kNumDiseaseClasses; ++i) {
    if (text == kClassNames[i]) return static_cast<DiseaseClass>(i);
  }
  return std::nullopt;
}

std::string_view averaging_name(AucAveraging averaging) {
  return averaging == AucAveraging::kMacro ? "macro" : "micro";
}

std::optional<AucAveraging> parse_averaging(std::string_view text) {
  if (text == "macro") return AucAveraging::kMacro;
  if (text == "micro") return AucAveraging::kMicro;
  return std::nullopt;
}

std::string_view metric_kind_name(MetricKind kind) {
  return kind == MetricKind::kAccuracy ? "accuracy" : "auc";
}

double accuracy(std::span<const LabeledPrediction> preds, std::optional<SkinGroup> subset) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const LabeledPrediction& p : preds) {
    if (!selected(p, subset)) continue;
    ++total;
    if (p.predicted_label == p.true_label) ++correct;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyGroup, subset_label(subset));
  return static_cast<double>(correct) / static_cast<double>(total);
}

double roc_auc(std::span<const ScoredLabel> samples) {
  std::uint64_t positives = 0;
  for (const ScoredLabel& s : samples) positives += s.positive ? 1 : 0;
  const std::uint64_t negatives = samples.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kDegenerateLabels, "roc needs both positive and negative samples");
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].score > samples[b].score;
  });

  // Twice the trapezoid area in units of (tp, fp) counts stays integral.
  std::uint64_t twice_area = 0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = samples[order[i]].score;
    std::uint64_t tp_next = tp;
    std::uint64_t fp_next = fp;
    for (; i < order.size() && samples[order[i]].score == threshold; ++i) {
      if (samples[order[i]].positive) {
        ++tp_next;
      } else {
        ++fp_next;
      }
    }
    twice_area += (fp_next - fp) * (tp + tp_next);
    tp = tp_next;
    fp = fp_next;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

AucResult multiclass_auc(std::span<const LabeledPrediction> preds,
                         std::optional<SkinGroup> subset, AucAveraging averaging) {
  std::vector<const LabeledPrediction*> chosen;
  for (const LabeledPrediction& p : preds) {
    if (selected(p, subset)) chosen.push_back(&p);
  }
  if (chosen.empty()) throw Error(ErrorCode::kEmptyGroup, subset_label(subset));

  AucResult result;
  if (averaging == AucAveraging::kMicro) {
    std::vector<ScoredLabel> pooled;
    pooled.reserve(chosen.size() * kNumDiseaseClasses);
    for (const LabeledPrediction* p : chosen) {
      for (int c = 0; c < kNumDiseaseClasses; ++c) {
        pooled.push_back({p->scores[c], static_cast<int>(p->true_label) == c});
      }
    }
    result.value = roc_auc(pooled);
    return result;
  }

  double sum = 0.0;
  int used = 0;
  std::vector<ScoredLabel> column(chosen.size());
  for (int c = 0; c < kNumDiseaseClasses; ++c) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const bool positive = static_cast<int>(chosen[i]->true_label) == c;
      column[i] = {chosen[i]->scores[c], positive};
      pos += positive ? 1 : 0;
    }
    if (pos == 0 || pos == chosen.size()) {
      result.warnings.push_back("auc(" + subset_label(subset) + "): class " +
                                std::string(kClassNames[c]) +
                                (pos == 0 ? " has no positives" : " has no negatives") +
                                ", excluded from the macro average");
      continue;
    }
    sum += roc_auc(column);
    ++used;
  }
  if (used == 0) {
    throw Error(ErrorCode::kDegenerateLabels,
                "no class has both positives and negatives in " + subset_label(subset));
  }
  result.value = sum / used;
  return result;
}

double joint_fairness_score(double alpha, double value_b, double gap_b, double value_d,
                            double gap_d) {
  return alpha * (gap_b - gap_d) + (1.0 - alpha) * (value_d - value_b);
}

double margin_of_error(double p, std::size_t n, double z) {
  if (n == 0) throw Error(ErrorCode::kEmptyGroup, "margin of error with n = 0");
  return 100.0 * z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double gap_margin_of_error(double p1, std::size_t n1, double p2, std::size_t n2, double z) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorCode::kEmptyGroup, "gap margin with n = 0");
  return 100.0 * z *
         std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n1) +
                   p2 * (1.0 - p2) / static_cast<double>(n2));
}

ConfusionCounts seg_confusion(const LabelMask& pred, const LabelMask& gt, int class_id) {
  if (!pred.same_shape(gt)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(pred.width()) + "x" + std::to_string(pred.height()) + " vs " +
                    std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  if (class_id < 0 || class_id >= kNumMaskClasses) {
    throw Error(ErrorCode::kInvalidLabel, "class id " + std::to_string(class_id));
  }
  ConfusionCounts c;
  auto p = pred.data();
  auto g = gt.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= kNumMaskClasses || g[i] >= kNumMaskClasses) {
      throw Error(ErrorCode::kInvalidLabel,
                  "label " + std::to_string(std::max(p[i], g[i])) + " at index " +
                      std::to_string(i));
    }
    const bool in_pred = p[i] == class_id;
    const bool in_gt = g[i] == class_id;
    if (in_pred && in_gt) {
      ++c.tp;
    } else if (in_pred) {
      ++c.fp;
    } else if (in_gt) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

OverlapScore jaccard(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return {1.0, true};
  return {static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

OverlapScore dice(const ConfusionCounts& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return {1.0, true};
  return {2.0 * static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

ClassificationReport classification_report(std::span<const LabeledPrediction> preds,
                                           AucAveraging averaging, double z) {
  if (preds.empty()) throw Error(ErrorCode::kEmptyGroup, "no predictions");
  ClassificationReport report;
  report.n = preds.size();
  report.auc_averaging = std::string(averaging_name(averaging));

  std::map<SkinGroup, std::size_t> counts;
  for (const LabeledPrediction& p : preds) ++counts[p.group];
  const bool both = counts.size() == 2;
  if (!both) {
    report.warnings.push_back(std::string("only group ") +
                              std::string(group_name(counts.begin()->first)) +
                              " present; gaps omitted");
  }

  GroupedMetric acc;
  const double acc_all = accuracy(preds);
  acc.overall = 100.0 * acc_all;
  acc.margin = margin_of_error(acc_all, preds.size(), z);
  std::map<SkinGroup, double> acc_fraction;
  for (const auto& [group, n] : counts) {
    const double a = accuracy(preds, group);
    acc_fraction[group] = a;
    acc.per_group[group] = {100.0 * a, n, margin_of_error(a, n, z)};
  }
  if (both) {
    acc.gap = std::fabs(acc.per_group[SkinGroup::kLight].value -
                        acc.per_group[SkinGroup::kDark].value);
    acc.gap_margin = gap_margin_of_error(acc_fraction[SkinGroup::kLight],
                                         counts[SkinGroup::kLight],
                                         acc_fraction[SkinGroup::kDark],
                                         counts[SkinGroup::kDark], z);
  }
  if (counts.contains(SkinGroup::kDark)) acc.min_ds = acc.per_group[SkinGroup::kDark].value;
  report.accuracy = acc;

  try {
    GroupedMetric auc;
    AucResult overall = multiclass_auc(preds, std::nullopt, averaging);
    auc.overall = overall.value;
    auc.margin = margin_of_error(overall.value, preds.size(), z) / 100.0;
    report.warnings.insert(report.warnings.end(), overall.warnings.begin(),
                           overall.warnings.end());
    for (const auto& [group, n] : counts) {
      try {
        AucResult r = multiclass_auc(preds, group, averaging);
        auc.per_group[group] = {r.value, n, margin_of_error(r.value, n, z) / 100.0};
        report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
      } catch (const Error& e) {
        report.warnings.push_back("auc(" + std::string(group_name(group)) +
                                  ") omitted: " + e.what());
      }
    }
    if (auc.per_group.size() == 2) {
      const GroupValue& ls = auc.per_group[SkinGroup::kLight];
      const GroupValue& ds = auc.per_group[SkinGroup::kDark];
      auc.gap = std::fabs(ls.value - ds.value);
      auc.gap_margin = gap_margin_of_error(ls.value, ls.n, ds.value, ds.n, z) / 100.0;
    }
    if (auc.per_group.contains(SkinGroup::kDark)) {
      auc.min_ds = auc.per_group[SkinGroup::kDark].value;
    }
    report.auc = auc;
  } catch (const Error& e) {
    report.warnings.push_back(std::string("auc omitted: ") + e.what());
  }
  return report;
}

SegmentationReport seg_report(std::span<const SegSample> samples, double z) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyGroup, "no segmentation samples");
  SegmentationReport report;
  report.n = samples.size();
  std::size_t absent = 0;
  std::map<SkinGroup, std::size_t> counts;
  for (const SegSample& s : samples) {
    SegImageScores img;
    img.sample_id = s.sample_id;
    img.group = s.group;
    if (s.group) ++counts[*s.group];
    double jsum = 0.0;
    double dsum = 0.0;
    for (int c = 0; c < kNumMaskClasses; ++c) {
      const ConfusionCounts cc = seg_confusion(s.pred, s.gt, c);
      const OverlapScore j = jaccard(cc);
      img.jaccard[c] = j.value;
      img.dice[c] = dice(cc).value;
      img.class_absent[c] = j.class_absent;
      absent += j.class_absent ? 1 : 0;
      jsum += img.jaccard[c];
      dsum += img.dice[c];
    }
    img.mean_jaccard = jsum / kNumMaskClasses;
    img.mean_dice = dsum / kNumMaskClasses;
    report.images.push_back(std::move(img));
  }
  if (absent > 0) {
    report.warnings.push_back(std::to_string(absent) +
                              " (image, class) pairs absent from both masks scored as 1");
  }
  const bool both = counts.size() == 2;
  if (!both) report.warnings.push_back("both ls and ds groups are required for gaps; gaps omitted");
  const std::size_t ungrouped = samples.size() - [&] {
    std::size_t t = 0;
    for (const auto& [g, n] : counts) t += n;
    return t;
  }();
  if (ungrouped > 0) {
    report.warnings.push_back(std::to_string(ungrouped) +
                              " samples without a group count toward overall values only");
  }
  report.jaccard = summarize_scores(report.images, &SegImageScores::mean_jaccard, z, both);
  report.dice = summarize_scores(report.images, &SegImageScores::mean_dice, z, both);
  return report;
}

ComparisonResult compare(const ClassificationReport& baseline,
                         const ClassificationReport& debiased,
                         std::span<const double> alphas) {
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, "alpha must lie in [0, 1]");
    }
  }
  ComparisonResult result;
  result.alphas.assign(alphas.begin(), alphas.end());

  auto add = [&](MetricKind kind, const std::optional<GroupedMetric>& b,
                 const std::optional<GroupedMetric>& d) {
    const std::string name(metric_kind_name(kind));
    if (!b || !d) {
      result.warnings.push_back(name + " missing from " +
                                (!b ? "baseline" : "debiased") + " report; omitted");
      return;
    }
    result.side_by_side.push_back(
        {kind, b->overall, d->overall, b->gap, d->gap, b->min_ds, d->min_ds});
    if (!b->gap || !d->gap) {
      result.warnings.push_back(name + " gap missing from " +
                                (!b->gap ? "baseline" : "debiased") +
                                " report; scores omitted");
      return;
    }
    for (double alpha : alphas) {
      result.comparisons.push_back(
          {alpha, kind, b->overall, *b->gap, d->overall, *d->gap,
           joint_fairness_score(alpha, b->overall, *b->gap, d->overall, *d->gap)});
    }
  };
  add(MetricKind::kAccuracy, baseline.accuracy, debiased.accuracy);
  add(MetricKind::kAuc, baseline.auc, debiased.auc);
  return result;
}

}  // namespace lesionfair
