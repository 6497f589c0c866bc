#include "lesionfair/report.hpp"

#include <cstdio>
#include <sstream>

namespace lesionfair {
namespace {

using nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void dump_into(const ordered_json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (v.type()) {
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(it.key()).dump() + ": ";
        dump_into(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_into(item, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += fixed6(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

ordered_json group_key_json(const std::map<SkinGroup, GroupValue>& groups) {
  ordered_json out = ordered_json::object();
  // ls before ds regardless of enum order.
  for (SkinGroup g : {SkinGroup::kLight, SkinGroup::kDark}) {
    auto it = groups.find(g);
    if (it == groups.end()) continue;
    ordered_json entry;
    entry["value"] = it->second.value;
    entry["n"] = it->second.n;
    if (it->second.margin) entry["margin"] = *it->second.margin;
    out[std::string(group_name(g))] = entry;
  }
  return out;
}

ordered_json optional_group(const std::optional<SkinGroup>& g) {
  return g ? ordered_json(std::string(group_name(*g))) : ordered_json(nullptr);
}

double number_field(const ordered_json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error(ErrorCode::kInvalidField, where + "." + key + " must be a number");
  }
  return it->get<double>();
}

std::optional<double> optional_number(const ordered_json& obj, const char* key,
                                      const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorCode::kInvalidField, where + "." + key + " must be a number");
  }
  return it->get<double>();
}

GroupedMetric parse_grouped(const ordered_json& obj, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::kInvalidField, where + " must be an object");
  GroupedMetric m;
  m.overall = number_field(obj, "overall", where);
  m.margin = optional_number(obj, "margin", where);
  m.gap = optional_number(obj, "gap", where);
  m.gap_margin = optional_number(obj, "gap_margin", where);
  m.min_ds = optional_number(obj, "min_ds", where);
  if (const auto it = obj.find("groups"); it != obj.end()) {
    if (!it->is_object()) throw Error(ErrorCode::kInvalidField, where + ".groups");
    for (const auto& [key, entry] : it->items()) {
      const auto group = parse_group(key);
      if (!group) throw Error(ErrorCode::kInvalidField, where + ".groups." + key);
      const std::string sub = where + ".groups." + key;
      GroupValue gv;
      gv.value = number_field(entry, "value", sub);
      gv.n = static_cast<std::size_t>(optional_number(entry, "n", sub).value_or(0.0));
      gv.margin = optional_number(entry, "margin", sub);
      m.per_group[*group] = gv;
    }
  }
  return m;
}

std::string format_alpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

}  // namespace

std::string dump_fixed(const ordered_json& value) {
  std::string out;
  dump_into(value, 0, out);
  out += "\n";
  return out;
}

ordered_json to_json(const GroupedMetric& metric) {
  ordered_json out;
  out["overall"] = metric.overall;
  if (metric.margin) out["margin"] = *metric.margin;
  out["groups"] = group_key_json(metric.per_group);
  if (metric.gap) out["gap"] = *metric.gap;
  if (metric.gap_margin) out["gap_margin"] = *metric.gap_margin;
  if (metric.min_ds) out["min_ds"] = *metric.min_ds;
  return out;
}

ordered_json to_json(const ClassificationReport& report) {
  ordered_json out;
  out["report"] = "classification";
  out["n"] = report.n;
  out["auc_averaging"] = report.auc_averaging;
  if (report.accuracy) out["accuracy"] = to_json(*report.accuracy);
  if (report.auc) out["auc"] = to_json(*report.auc);
  out["warnings"] = report.warnings;
  return out;
}

ordered_json to_json(const SegmentationReport& report) {
  ordered_json out;
  out["report"] = "segmentation";
  out["n"] = report.n;
  out["jaccard"] = to_json(report.jaccard);
  out["dice"] = to_json(report.dice);
  ordered_json images = ordered_json::array();
  for (const SegImageScores& img : report.images) {
    ordered_json e;
    e["sample_id"] = img.sample_id;
    e["group"] = optional_group(img.group);
    e["jaccard"] = img.jaccard;
    e["dice"] = img.dice;
    e["class_absent"] = img.class_absent;
    e["mean_jaccard"] = img.mean_jaccard;
    e["mean_dice"] = img.mean_dice;
    images.push_back(std::move(e));
  }
  out["images"] = std::move(images);
  out["warnings"] = report.warnings;
  return out;
}

ordered_json to_json(const ComparisonResult& result) {
  ordered_json out;
  out["report"] = "comparison";
  out["alphas"] = result.alphas;
  ordered_json comparisons = ordered_json::array();
  for (const FairnessComparison& c : result.comparisons) {
    ordered_json e;
    e["name"] = score_label(c.metric_kind, c.alpha);
    e["metric"] = std::string(metric_kind_name(c.metric_kind));
    e["alpha"] = c.alpha;
    e["baseline"] = {{"value", c.baseline_value}, {"gap", c.baseline_gap}};
    e["debiased"] = {{"value", c.debiased_value}, {"gap", c.debiased_gap}};
    e["score"] = c.score;
    comparisons.push_back(std::move(e));
  }
  out["comparisons"] = std::move(comparisons);
  ordered_json sides = ordered_json::array();
  for (const MetricSideBySide& s : result.side_by_side) {
    auto side = [](double value, const std::optional<double>& gap,
                   const std::optional<double>& min_ds) {
      ordered_json e;
      e["value"] = value;
      e["gap"] = gap ? ordered_json(*gap) : ordered_json(nullptr);
      e["min_ds"] = min_ds ? ordered_json(*min_ds) : ordered_json(nullptr);
      return e;
    };
    ordered_json e;
    e["metric"] = std::string(metric_kind_name(s.metric_kind));
    e["baseline"] = side(s.baseline_value, s.baseline_gap, s.baseline_min_ds);
    e["debiased"] = side(s.debiased_value, s.debiased_gap, s.debiased_min_ds);
    sides.push_back(std::move(e));
  }
  out["side_by_side"] = std::move(sides);
  out["warnings"] = result.warnings;
  return out;
}

ClassificationReport parse_classification_report(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidField, std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidField, "report must be a JSON object");
  ClassificationReport report;
  report.n = static_cast<std::size_t>(optional_number(doc, "n", "report").value_or(0.0));
  if (const auto it = doc.find("auc_averaging"); it != doc.end() && it->is_string()) {
    report.auc_averaging = it->get<std::string>();
  }
  if (const auto it = doc.find("accuracy"); it != doc.end()) {
    report.accuracy = parse_grouped(*it, "accuracy");
  }
  if (const auto it = doc.find("auc"); it != doc.end()) {
    report.auc = parse_grouped(*it, "auc");
  }
  if (const auto it = doc.find("warnings"); it != doc.end() && it->is_array()) {
    for (const auto& w : *it) {
      if (w.is_string()) report.warnings.push_back(w.get<std::string>());
    }
  }
  return report;
}

std::string score_label(MetricKind kind, double alpha) {
  return std::string(kind == MetricKind::kAccuracy ? "CAI_" : "CAUCI_") + format_alpha(alpha);
}

std::string comparison_csv(const ComparisonResult& result) {
  std::ostringstream os;
  os << "metric,baseline,debiased\n";
  auto cell = [](const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); };
  for (const MetricSideBySide& s : result.side_by_side) {
    const bool acc = s.metric_kind == MetricKind::kAccuracy;
    const std::string name = acc ? "acc" : "AUC";
    os << name << ',' << fixed6(s.baseline_value) << ',' << fixed6(s.debiased_value) << '\n';
    os << name << "_gap," << cell(s.baseline_gap) << ',' << cell(s.debiased_gap) << '\n';
    os << name << "_min_ds," << cell(s.baseline_min_ds) << ',' << cell(s.debiased_min_ds)
       << '\n';
    for (const FairnessComparison& c : result.comparisons) {
      if (c.metric_kind != s.metric_kind) continue;
      os << score_label(c.metric_kind, c.alpha) << ",," << fixed6(c.score) << '\n';
    }
  }
  return os.str();
}

}  // namespace lesionfair
