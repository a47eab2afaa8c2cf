#include "vesselseg/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace vesselseg {

std::string_view to_string(Observer o) { return o == Observer::First ? "first" : "second"; }

Observer parse_observer(std::string_view s) {
  if (s == "first" || s == "1") return Observer::First;
  if (s == "second" || s == "2") return Observer::Second;
  throw InvalidArgument("unknown observer '" + std::string(s) + "'");
}

void PipelineConfig::validate() const {
  if (scales.empty()) throw InvalidArgument("config: at least one scale is required");
  for (const auto& p : scale_params()) p.validate();
  if (n_orientations < 1) throw InvalidArgument("config: n_orientations must be >= 1");
  threshold_params().validate();
  disc_se(se_diameter);
  clahe.validate();
  if (pad_width < 0) throw InvalidArgument("config: pad_width must be >= 0");
}

std::vector<ScaleParams> PipelineConfig::scale_params() const {
  std::vector<ScaleParams> out;
  for (const auto& s : scales) out.push_back({s.length, s.sigma, t, SupportRule::Modified});
  return out;
}

ThresholdParams PipelineConfig::threshold_params() const { return {c, w, normalization}; }

PreprocessParams PipelineConfig::preprocess_params() const { return {se_diameter, pad_width, clahe}; }

SegmentOptions PipelineConfig::segment_options() const { return {orientation_pairing, convolution}; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("config: '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<ScaleSpec> parse_scales(std::string_view text) {
  std::vector<ScaleSpec> out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw InvalidArgument("config: scale '" + std::string(item) + "' is not L:sigma");
    out.push_back({parse_number<int>("scales", parts[0]), parse_number<double>("scales", parts[1])});
  }
  return out;
}

}  // namespace

std::string serialize_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "schema_version = " << kConfigSchemaVersion << "\n";
  out << "scales = ";
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    out << (i ? ", " : "") << cfg.scales[i].length << ":" << format_double(cfg.scales[i].sigma);
  }
  out << "\n";
  out << "t = " << format_double(cfg.t) << "\n";
  out << "n_orientations = " << cfg.n_orientations << "\n";
  out << "c = " << format_double(cfg.c) << "\n";
  out << "w = " << cfg.w << "\n";
  out << "se_diameter = " << cfg.se_diameter << "\n";
  out << "clahe_tiles = " << cfg.clahe.tile_rows << "x" << cfg.clahe.tile_cols << "\n";
  out << "clahe_clip_limit = " << format_double(cfg.clahe.clip_limit) << "\n";
  out << "clahe_bins = " << cfg.clahe.bins << "\n";
  out << "pad_width = " << cfg.pad_width << "\n";
  out << "orientation_pairing = " << to_string(cfg.orientation_pairing) << "\n";
  out << "normalization = " << to_string(cfg.normalization) << "\n";
  out << "observer = " << to_string(cfg.observer) << "\n";
  out << "convolution = " << to_string(cfg.convolution) << "\n";
  return out.str();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) throw InvalidArgument("config: duplicate key '" + std::string(key) + "'");

    if (key == "schema_version") {
      const int v = parse_number<int>(key, value);
      if (v != kConfigSchemaVersion) {
        throw InvalidArgument("config: unsupported schema_version " + std::to_string(v));
      }
    } else if (key == "scales") {
      cfg.scales = parse_scales(value);
    } else if (key == "t") {
      cfg.t = parse_number<double>(key, value);
    } else if (key == "n_orientations") {
      cfg.n_orientations = parse_number<int>(key, value);
    } else if (key == "c") {
      cfg.c = parse_number<double>(key, value);
    } else if (key == "w") {
      cfg.w = parse_number<int>(key, value);
    } else if (key == "se_diameter") {
      cfg.se_diameter = parse_number<int>(key, value);
    } else if (key == "clahe_tiles") {
      const auto parts = split(value, 'x');
      if (parts.size() != 2) throw InvalidArgument("config: clahe_tiles expects ROWSxCOLS");
      cfg.clahe.tile_rows = parse_number<int>(key, parts[0]);
      cfg.clahe.tile_cols = parse_number<int>(key, parts[1]);
    } else if (key == "clahe_clip_limit") {
      cfg.clahe.clip_limit = parse_number<double>(key, value);
    } else if (key == "clahe_bins") {
      cfg.clahe.bins = parse_number<int>(key, value);
    } else if (key == "pad_width") {
      cfg.pad_width = parse_number<int>(key, value);
    } else if (key == "orientation_pairing") {
      cfg.orientation_pairing = parse_orientation_pairing(value);
    } else if (key == "normalization") {
      cfg.normalization = parse_edge_normalization(value);
    } else if (key == "observer") {
      cfg.observer = parse_observer(value);
    } else if (key == "convolution") {
      cfg.convolution = parse_convolution_strategy(value);
    } else {
      throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path.string());
  out << serialize_config(config);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace vesselseg
