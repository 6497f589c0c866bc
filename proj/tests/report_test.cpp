#include "lesionfair/report.hpp"

#include <gtest/gtest.h>

namespace lesionfair {
namespace {

using nlohmann::ordered_json;

GroupedMetric sample_metric() {
  GroupedMetric m;
  m.overall = 85.09933774834437;
  m.margin = 4.017;
  m.per_group[SkinGroup::kDark] = {73.07692307692308, 26, 17.05};
  m.per_group[SkinGroup::kLight] = {86.23188405797102, 276, 4.07};
  m.gap = 13.154960981047938;
  m.gap_margin = 17.5;
  m.min_ds = 73.07692307692308;
  return m;
}

TEST(DumpFixed, FloatsIntsAndLayout) {
  ordered_json doc;
  doc["b"] = 1.5;
  doc["a"] = 7;
  doc["neg_zero"] = -0.0000001;
  doc["list"] = {0.1234567, 2};
  doc["empty"] = ordered_json::array();
  doc["name"] = "x\"y";
  EXPECT_EQ(dump_fixed(doc),
            "{\n"
            "  \"b\": 1.500000,\n"
            "  \"a\": 7,\n"
            "  \"neg_zero\": 0.000000,\n"
            "  \"list\": [\n"
            "    0.123457,\n"
            "    2\n"
            "  ],\n"
            "  \"empty\": [],\n"
            "  \"name\": \"x\\\"y\"\n"
            "}\n");
}

TEST(ToJson, GroupedMetricKeyOrder) {
  const ordered_json j = to_json(sample_metric());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"overall", "margin", "groups", "gap",
                                            "gap_margin", "min_ds"}));
  // ls listed before ds.
  EXPECT_EQ(j["groups"].begin().key(), "ls");
  EXPECT_EQ(j["groups"]["ds"]["n"], 26);
}

TEST(ToJson, ClassificationRoundTrip) {
  ClassificationReport r;
  r.n = 302;
  r.accuracy = sample_metric();
  GroupedMetric auc;
  auc.overall = 0.9725;
  auc.gap = 0.0331;
  auc.min_ds = 0.942;
  r.auc = auc;
  r.warnings = {"something"};
  const std::string text = dump_fixed(to_json(r));
  EXPECT_EQ(text.rfind("{\n  \"report\": \"classification\",\n  \"n\": 302,", 0), 0u);
  const ClassificationReport back = parse_classification_report(text);
  EXPECT_EQ(back.n, 302u);
  EXPECT_NEAR(back.accuracy->overall, 85.099338, 1e-9);
  EXPECT_NEAR(*back.accuracy->gap, 13.154961, 1e-9);
  EXPECT_EQ(back.accuracy->per_group.at(SkinGroup::kDark).n, 26u);
  EXPECT_NEAR(back.auc->overall, 0.9725, 1e-12);
  EXPECT_FALSE(back.auc->margin.has_value());
  EXPECT_EQ(back.warnings, r.warnings);
  // Serializing the parsed report reproduces the same text.
  EXPECT_EQ(dump_fixed(to_json(back)), text);
}

TEST(ParseReport, HandWrittenMinimal) {
  const ClassificationReport r = parse_classification_report(
      R"({"accuracy": {"overall": 83.44, "gap": 2.16}, "auc": {"overall": 0.9623}})");
  EXPECT_EQ(r.accuracy->overall, 83.44);
  EXPECT_EQ(*r.accuracy->gap, 2.16);
  EXPECT_FALSE(r.auc->gap.has_value());
}

TEST(ParseReport, Malformed) {
  EXPECT_THROW(parse_classification_report("{"), Error);
  EXPECT_THROW(parse_classification_report("[]"), Error);
  EXPECT_THROW(parse_classification_report(R"({"accuracy": {"gap": 1.0}})"), Error);
  EXPECT_THROW(parse_classification_report(R"({"accuracy": {"overall": "high"}})"), Error);
  EXPECT_THROW(
      parse_classification_report(R"({"accuracy": {"overall": 1, "groups": {"mid": {}}}})"),
      Error);
}

TEST(ScoreLabel, Formats) {
  EXPECT_EQ(score_label(MetricKind::kAccuracy, 0.5), "CAI_0.5");
  EXPECT_EQ(score_label(MetricKind::kAuc, 0.75), "CAUCI_0.75");
  EXPECT_EQ(score_label(MetricKind::kAuc, 1.0), "CAUCI_1");
}

TEST(ComparisonOutput, JsonAndCsv) {
  ClassificationReport b, d;
  b.accuracy = GroupedMetric{};
  b.accuracy->overall = 85.10;
  b.accuracy->gap = 13.15;
  b.accuracy->min_ds = 73.08;
  d.accuracy = GroupedMetric{};
  d.accuracy->overall = 83.44;
  d.accuracy->gap = 2.16;
  d.accuracy->min_ds = 81.48;
  const std::vector<double> alphas{0.5, 0.75};
  const ComparisonResult r = compare(b, d, alphas);

  const ordered_json j = to_json(r);
  EXPECT_EQ(j["comparisons"][0]["name"], "CAI_0.5");
  EXPECT_EQ(j["comparisons"][0]["metric"], "accuracy");
  EXPECT_NE(dump_fixed(j).find("\"score\": 4.665000"), std::string::npos);
  EXPECT_EQ(j["warnings"].size(), 1u);

  EXPECT_EQ(comparison_csv(r),
            "metric,baseline,debiased\n"
            "acc,85.100000,83.440000\n"
            "acc_gap,13.150000,2.160000\n"
            "acc_min_ds,73.080000,81.480000\n"
            "CAI_0.5,,4.665000\n"
            "CAI_0.75,,7.827500\n");
}

TEST(ToJson, SegmentationImagesListed) {
  const LabelMask m(2, 2, 1);
  std::vector<SegSample> s{{"a", m, m, SkinGroup::kLight}, {"b", m, m, std::nullopt}};
  const ordered_json j = to_json(seg_report(s));
  EXPECT_EQ(j["report"], "segmentation");
  EXPECT_EQ(j["images"].size(), 2u);
  EXPECT_TRUE(j["images"][1]["group"].is_null());
  EXPECT_EQ(j["images"][0]["class_absent"][0], true);
  EXPECT_FALSE(j["jaccard"].contains("gap"));
}

}  // namespace
}  // namespace lesionfair
