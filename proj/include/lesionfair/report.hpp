#pragma once

#include <string>

#include <json.hpp>

#include "lesionfair/metrics.hpp"

namespace lesionfair {

// Serializes with insertion-ordered keys, two-space indent, and every
// floating-point number rendered as fixed-point with six decimals. Integers
// stay integers. The output ends with a newline.
std::string dump_fixed(const nlohmann::ordered_json& value);

nlohmann::ordered_json to_json(const GroupedMetric& metric);
nlohmann::ordered_json to_json(const ClassificationReport& report);
nlohmann::ordered_json to_json(const SegmentationReport& report);
nlohmann::ordered_json to_json(const ComparisonResult& result);

// Accepts both generated reports and hand-written ones that carry only
// "overall" (plus optionally "gap" and "min_ds") per metric. Throws
// kInvalidField on malformed input.
ClassificationReport parse_classification_report(const std::string& text);

// e.g. "CAI_0.5", "CAUCI_0.75".
std::string score_label(MetricKind kind, double alpha);

// Table-style CSV with one row per metric and baseline/debiased columns:
// acc, acc_gap, acc_min_ds, CAI_a..., AUC, AUC_gap, AUC_min_ds, CAUCI_a...
std::string comparison_csv(const ComparisonResult& result);

}  // namespace lesionfair
