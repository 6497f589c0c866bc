#include "lesionfair/config.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace lesionfair {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) bad("unknown key " + where + "." + key);
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

template <typename Fn>
void if_present(const json& obj, const char* key, Fn&& fn) {
  if (const auto it = obj.find(key); it != obj.end()) fn(*it);
}

Rgb parse_rgb(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) bad(where + " must be [r, g, b]");
  Rgb out;
  std::uint8_t* channels[3] = {&out.r, &out.g, &out.b};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer() || v[i].get<int>() < 0 || v[i].get<int>() > 255) {
      bad(where + " channels must be integers in [0, 255]");
    }
    *channels[i] = static_cast<std::uint8_t>(v[i].get<int>());
  }
  return out;
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad(where + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, where));
  return out;
}

}  // namespace

void ToolConfig::validate() const {
  mixup.validate();
  ita_bins.validate();
  palette.validate();
  if (!(z_value > 0.0)) bad("z_value must be > 0");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) bad("alphas must lie in [0, 1]");
  }
}

void apply_config(ToolConfig& cfg, const json& doc) {
  check_keys(doc, "config", {"mixup", "ita_bins", "auc_averaging", "z_value", "palette", "alphas"});

  if_present(doc, "mixup", [&](const json& m) {
    check_keys(m, "mixup", {"beta", "red_mask", "canny"});
    if_present(m, "beta", [&](const json& v) { cfg.mixup.beta = number(v, "mixup.beta"); });
    if_present(m, "red_mask", [&](const json& r) {
      check_keys(r, "mixup.red_mask", {"hue_windows", "sat_min", "val_min"});
      if_present(r, "hue_windows", [&](const json& w) {
        if (!w.is_array()) bad("mixup.red_mask.hue_windows must be an array");
        cfg.mixup.red_mask.hue_windows.clear();
        for (const auto& win : w) {
          if (!win.is_array() || win.size() != 2) {
            bad("mixup.red_mask.hue_windows entries must be [low, high]");
          }
          cfg.mixup.red_mask.hue_windows.push_back(
              {number(win[0], "hue_windows"), number(win[1], "hue_windows")});
        }
      });
      if_present(r, "sat_min",
                 [&](const json& v) { cfg.mixup.red_mask.sat_min = number(v, "sat_min"); });
      if_present(r, "val_min",
                 [&](const json& v) { cfg.mixup.red_mask.val_min = number(v, "val_min"); });
    });
    if_present(m, "canny", [&](const json& c) {
      check_keys(c, "mixup.canny",
                 {"gaussian_sigma", "kernel_radius", "low_threshold", "high_threshold"});
      CannyConfig& canny = cfg.mixup.canny;
      if_present(c, "gaussian_sigma",
                 [&](const json& v) { canny.gaussian_sigma = number(v, "gaussian_sigma"); });
      if_present(c, "kernel_radius", [&](const json& v) {
        if (!v.is_number_integer()) bad("mixup.canny.kernel_radius must be an integer");
        canny.kernel_radius = v.get<int>();
      });
      if_present(c, "low_threshold",
                 [&](const json& v) { canny.low_threshold = number(v, "low_threshold"); });
      if_present(c, "high_threshold",
                 [&](const json& v) { canny.high_threshold = number(v, "high_threshold"); });
    });
  });

  if_present(doc, "ita_bins", [&](const json& b) {
    check_keys(b, "ita_bins", {"categories", "lower_bounds", "ds_categories"});
    if_present(b, "categories", [&](const json& v) {
      cfg.ita_bins.categories = string_list(v, "ita_bins.categories");
    });
    if_present(b, "lower_bounds", [&](const json& v) {
      cfg.ita_bins.lower_bounds = number_list(v, "ita_bins.lower_bounds");
    });
    if_present(b, "ds_categories", [&](const json& v) {
      cfg.ita_bins.ds_categories = string_list(v, "ita_bins.ds_categories");
    });
  });

  if_present(doc, "auc_averaging", [&](const json& v) {
    const auto avg = v.is_string() ? parse_averaging(v.get<std::string>()) : std::nullopt;
    if (!avg) bad("auc_averaging must be \"macro\" or \"micro\"");
    cfg.auc_averaging = *avg;
  });
  if_present(doc, "z_value", [&](const json& v) { cfg.z_value = number(v, "z_value"); });
  if_present(doc, "alphas", [&](const json& v) { cfg.alphas = number_list(v, "alphas"); });
  if_present(doc, "palette", [&](const json& p) {
    check_keys(p, "palette", {"background", "skin", "lesion"});
    if_present(p, "background",
               [&](const json& v) { cfg.palette.colors[0] = parse_rgb(v, "palette.background"); });
    if_present(p, "skin",
               [&](const json& v) { cfg.palette.colors[1] = parse_rgb(v, "palette.skin"); });
    if_present(p, "lesion",
               [&](const json& v) { cfg.palette.colors[2] = parse_rgb(v, "palette.lesion"); });
  });
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  ToolConfig cfg;
  apply_config(cfg, doc);
  cfg.validate();
  return cfg;
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

nlohmann::ordered_json config_to_json(const ToolConfig& cfg) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json windows = nlohmann::ordered_json::array();
  for (const HueWindow& w : cfg.mixup.red_mask.hue_windows) {
    windows.push_back({w.low_deg, w.high_deg});
  }
  out["mixup"]["beta"] = cfg.mixup.beta;
  out["mixup"]["red_mask"]["hue_windows"] = windows;
  out["mixup"]["red_mask"]["sat_min"] = cfg.mixup.red_mask.sat_min;
  out["mixup"]["red_mask"]["val_min"] = cfg.mixup.red_mask.val_min;
  out["mixup"]["canny"]["gaussian_sigma"] = cfg.mixup.canny.gaussian_sigma;
  out["mixup"]["canny"]["kernel_radius"] = cfg.mixup.canny.kernel_radius;
  out["mixup"]["canny"]["low_threshold"] = cfg.mixup.canny.low_threshold;
  out["mixup"]["canny"]["high_threshold"] = cfg.mixup.canny.high_threshold;
  out["ita_bins"]["categories"] = cfg.ita_bins.categories;
  out["ita_bins"]["lower_bounds"] = cfg.ita_bins.lower_bounds;
  out["ita_bins"]["ds_categories"] = cfg.ita_bins.ds_categories;
  out["auc_averaging"] = std::string(averaging_name(cfg.auc_averaging));
  out["z_value"] = cfg.z_value;
  auto rgb = [](Rgb c) { return nlohmann::ordered_json::array({c.r, c.g, c.b}); };
  out["palette"]["background"] = rgb(cfg.palette.colors[0]);
  out["palette"]["skin"] = rgb(cfg.palette.colors[1]);
  out["palette"]["lesion"] = rgb(cfg.palette.colors[2]);
  out["alphas"] = cfg.alphas;
  return out;
}

}  // namespace lesionfair
