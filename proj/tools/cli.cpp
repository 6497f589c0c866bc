#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lesionfair/config.hpp"
#include "lesionfair/dataio.hpp"
#include "lesionfair/metrics.hpp"
#include "lesionfair/mixup.hpp"
#include "lesionfair/parallel.hpp"
#include "lesionfair/report.hpp"
#include "lesionfair/skintone.hpp"

namespace lesionfair::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  int jobs = 1;
  std::string output;
};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
}

std::string format4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "bad alpha '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidConfig, "--alphas is empty");
  return out;
}

ToolConfig resolve_config(const GlobalOptions& global) {
  std::optional<fs::path> explicit_path;
  if (!global.config.empty()) explicit_path = global.config;
  const auto path = resolve_config_path(explicit_path);
  return path ? load_config(*path) : ToolConfig{};
}

// --- preprocess -----------------------------------------------------------

struct PreprocessOptions {
  std::string input;
  std::string out_dir;
  std::optional<double> beta;
  bool emit_stages = false;
};

struct PreprocessJob {
  fs::path source;
  std::string stem;
};

struct PreprocessOutcome {
  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> files;
  std::string error;
};

int cmd_preprocess(const PreprocessOptions& opt, const GlobalOptions& global, std::ostream&,
                   std::ostream& err) {
  ToolConfig cfg = resolve_config(global);
  if (opt.beta) cfg.mixup.beta = *opt.beta;
  cfg.validate();

  const std::string out_dir = !opt.out_dir.empty() ? opt.out_dir : global.output;
  if (out_dir.empty()) throw Error(ErrorCode::kInvalidConfig, "no output directory given");

  std::vector<PreprocessJob> jobs;
  const fs::path input(opt.input);
  if (fs::is_directory(input)) {
    for (const fs::path& p : list_images(input)) jobs.push_back({p, p.stem().string()});
  } else {
    for (const ManifestRecord& rec : load_manifest(input)) {
      jobs.push_back({rec.image_path, rec.image_path.stem().string()});
    }
  }
  fs::create_directories(out_dir);

  std::vector<PreprocessOutcome> outcomes(jobs.size());
  parallel_for(jobs.size(), global.jobs, [&](std::size_t i) {
    PreprocessOutcome& o = outcomes[i];
    try {
      const RgbImage image = read_rgb(jobs[i].source);
      const PipelineStages stages = run_pipeline(image, cfg.mixup);
      const std::string& stem = jobs[i].stem;
      o.files.emplace_back(stem + ".png", encode_png(stages.result));
      if (opt.emit_stages) {
        o.files.emplace_back(stem + "_contrast.png", encode_png(stages.contrast));
        o.files.emplace_back(stem + "_gray.png", encode_png(stages.gray));
        o.files.emplace_back(stem + "_edges.png", encode_png(render_edges(stages.edges)));
      }
    } catch (const std::exception& e) {
      o.files.clear();
      o.error = e.what();
    }
  });

  int failures = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      err << "error: " << jobs[i].source.string() << ": " << outcomes[i].error << '\n';
      ++failures;
      continue;
    }
    for (const auto& [name, bytes] : outcomes[i].files) {
      write_bytes(fs::path(out_dir) / name, bytes);
    }
  }
  if (failures) err << failures << " of " << jobs.size() << " images failed\n";
  return failures ? 1 : 0;
}

// --- skintone -------------------------------------------------------------

struct SkintoneOptions {
  std::string manifest;
  bool use_masks = false;
};

int cmd_skintone(const SkintoneOptions& opt, const GlobalOptions& global, std::ostream& out,
                 std::ostream& err) {
  const ToolConfig cfg = resolve_config(global);
  const std::vector<ManifestRecord> records = load_manifest(opt.manifest);

  struct Outcome {
    std::optional<ItaAssessment> assessment;
    std::string error;
  };
  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), global.jobs, [&](std::size_t i) {
    const ManifestRecord& rec = records[i];
    try {
      const RgbImage image = read_rgb(rec.image_path);
      if (opt.use_masks) {
        if (!rec.mask_path) throw Error(ErrorCode::kNoSkinPixels, "no mask_path in manifest");
        const LabelMask mask = decode_mask(read_rgb(*rec.mask_path), cfg.palette);
        outcomes[i].assessment = assess(rec.sample_id, image, cfg.ita_bins, &mask);
      } else {
        outcomes[i].assessment = assess(rec.sample_id, image, cfg.ita_bins);
      }
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  if (!opt.use_masks && !records.empty()) {
    err << "warning: no skin masks used; ITA computed over all pixels\n";
  }
  std::ostringstream csv;
  csv << "sample_id,ita_degrees,category,group,n_pixels_used\n";
  int failures = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      err << "error: " << records[i].sample_id << ": " << outcomes[i].error << '\n';
      ++failures;
      continue;
    }
    const ItaAssessment& a = *outcomes[i].assessment;
    csv << csv_escape(a.sample_id) << ',' << format4(a.ita_degrees) << ',' << a.category << ','
        << group_name(a.group) << ',' << a.n_pixels_used << '\n';
  }
  write_text(global.output, csv.str(), out);
  return failures ? 1 : 0;
}

// --- eval-clf -------------------------------------------------------------

struct EvalClfOptions {
  std::string predictions;
  std::string averaging;
};

int cmd_eval_clf(const EvalClfOptions& opt, const GlobalOptions& global, std::ostream& out,
                 std::ostream& err) {
  ToolConfig cfg = resolve_config(global);
  if (!opt.averaging.empty()) {
    const auto avg = parse_averaging(opt.averaging);
    if (!avg) throw Error(ErrorCode::kInvalidConfig, "--averaging must be macro or micro");
    cfg.auc_averaging = *avg;
  }
  const PredictionSet set = load_predictions(opt.predictions);
  ClassificationReport report =
      classification_report(set.predictions, cfg.auc_averaging, cfg.z_value);
  report.warnings.insert(report.warnings.begin(), set.warnings.begin(), set.warnings.end());
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  write_text(global.output, dump_fixed(to_json(report)), out);
  return 0;
}

// --- eval-seg -------------------------------------------------------------

struct EvalSegOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::string groups;
};

int cmd_eval_seg(const EvalSegOptions& opt, const GlobalOptions& global, std::ostream& out,
                 std::ostream& err) {
  const ToolConfig cfg = resolve_config(global);
  const std::map<std::string, SkinGroup> groups = load_groups(opt.groups);

  std::vector<SegSample> samples;
  int failures = 0;
  for (const fs::path& gt_path : list_images(opt.gt_dir)) {
    const std::string id = gt_path.stem().string();
    try {
      SegSample s;
      s.sample_id = id;
      s.gt = decode_mask(read_rgb(gt_path), cfg.palette);
      s.pred = decode_mask(read_rgb(fs::path(opt.pred_dir) / (id + ".png")), cfg.palette);
      if (!s.pred.same_shape(s.gt)) throw Error(ErrorCode::kShapeMismatch, id);
      if (const auto it = groups.find(id); it != groups.end()) s.group = it->second;
      samples.push_back(std::move(s));
    } catch (const std::exception& e) {
      err << "error: " << id << ": " << e.what() << '\n';
      ++failures;
    }
  }
  const SegmentationReport report = seg_report(samples, cfg.z_value);
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  write_text(global.output, dump_fixed(to_json(report)), out);
  return failures ? 1 : 0;
}

// --- compare --------------------------------------------------------------

struct CompareOptions {
  std::string baseline;
  std::string debiased;
  std::string alphas;
  std::string csv;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_compare(const CompareOptions& opt, const GlobalOptions& global, std::ostream& out,
                std::ostream& err) {
  ToolConfig cfg = resolve_config(global);
  if (!opt.alphas.empty()) cfg.alphas = parse_alpha_list(opt.alphas);
  cfg.validate();
  const ClassificationReport baseline = parse_classification_report(slurp(opt.baseline));
  const ClassificationReport debiased = parse_classification_report(slurp(opt.debiased));
  const ComparisonResult result = compare(baseline, debiased, cfg.alphas);
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  write_text(global.output, dump_fixed(to_json(result)), out);
  if (!opt.csv.empty()) write_text(opt.csv, comparison_csv(result), out);
  return 0;
}

// --- summarize ------------------------------------------------------------

struct SummarizeOptions {
  std::string manifest;
  std::string groups;
};

int cmd_summarize(const SummarizeOptions& opt, const GlobalOptions& global, std::ostream& out,
                  std::ostream&) {
  const std::vector<ManifestRecord> records = load_manifest(opt.manifest);
  std::map<std::string, SkinGroup> groups;
  if (!opt.groups.empty()) groups = load_groups(opt.groups);
  write_text(global.output, summary_csv(summarize(records, groups)), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skin-lesion preprocessing and fairness evaluation toolkit", "lesionfair"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config,
                 "JSON config file (falls back to $LESIONFAIR_CONFIG)");
  app.add_option("--jobs", global.jobs, "Worker threads for per-image work")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", global.output, "Output file (or directory for preprocess)");

  PreprocessOptions pre;
  double beta = 0.0;
  auto* preprocess = app.add_subcommand("preprocess", "Blend detected edges into images");
  preprocess->add_option("input", pre.input, "Image directory or manifest CSV")->required();
  preprocess->add_option("out_dir", pre.out_dir, "Output directory");
  auto* beta_opt = preprocess->add_option("--beta", beta, "Edge image weight in [0, 1]");
  preprocess->add_flag("--emit-stages", pre.emit_stages,
                       "Also write *_contrast, *_gray and *_edges panels");

  SkintoneOptions skin;
  auto* skintone = app.add_subcommand("skintone", "Estimate ITA and ls/ds group per sample");
  skintone->add_option("manifest", skin.manifest, "Manifest CSV")->required();
  skintone->add_flag("--use-masks", skin.use_masks, "Restrict ITA to skin-class mask pixels");

  EvalClfOptions clf;
  auto* eval_clf = app.add_subcommand("eval-clf", "Classification utility and fairness report");
  eval_clf->add_option("predictions", clf.predictions, "Predictions CSV")->required();
  eval_clf->add_option("--averaging", clf.averaging, "AUC averaging: macro or micro");

  EvalSegOptions seg;
  auto* eval_seg = app.add_subcommand("eval-seg", "Segmentation utility and fairness report");
  eval_seg->add_option("pred_dir", seg.pred_dir, "Predicted mask directory")->required();
  eval_seg->add_option("gt_dir", seg.gt_dir, "Ground-truth mask directory")->required();
  eval_seg->add_option("groups", seg.groups, "CSV with sample_id and group columns")
      ->required();

  CompareOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "CAI / CAUCI of a debiased vs baseline report");
  compare_cmd->add_option("baseline", cmp.baseline, "Baseline classification report")
      ->required();
  compare_cmd->add_option("debiased", cmp.debiased, "Debiased classification report")
      ->required();
  compare_cmd->add_option("--alphas", cmp.alphas, "Comma-separated alpha values");
  compare_cmd->add_option("--csv", cmp.csv, "Also write a table-style CSV here");

  SummarizeOptions sum;
  auto* summarize_cmd = app.add_subcommand("summarize", "Per split/label/group counts");
  summarize_cmd->add_option("manifest", sum.manifest, "Manifest CSV")->required();
  summarize_cmd->add_option("--groups", sum.groups, "CSV with sample_id and group columns");

  std::vector<const char*> argv{"lesionfair"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*preprocess) {
      if (beta_opt->count()) pre.beta = beta;
      return cmd_preprocess(pre, global, out, err);
    }
    if (*skintone) return cmd_skintone(skin, global, out, err);
    if (*eval_clf) return cmd_eval_clf(clf, global, out, err);
    if (*eval_seg) return cmd_eval_seg(seg, global, out, err);
    if (*compare_cmd) return cmd_compare(cmp, global, out, err);
    if (*summarize_cmd) return cmd_summarize(sum, global, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace lesionfair::cli
