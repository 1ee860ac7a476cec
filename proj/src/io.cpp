#include "ugc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace ugc::io {

using nlohmann::json;

namespace {

TypeDistribution parse_distribution(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("distribution: expected an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return TypeDistribution::uniform();
  if (kind == "piecewise") {
    if (!j.contains("knots")) throw ConfigError("distribution: piecewise kind needs \"knots\"");
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2)
        throw ConfigError("distribution: each knot must be a [x, F] pair");
      knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    try {
      return TypeDistribution::piecewise_linear(std::move(knots));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("distribution: unknown kind \"" + kind + "\"");
}

json profile_to_json(const ActionProfile& p) {
  json a = json::array();
  for (double x : p.actions) a.push_back(x);
  return a;
}

json report_json(const verify::DeviationReport& rep) {
  return json{{"is_equilibrium", rep.is_equilibrium},
              {"worst_deviator", rep.worst_deviator},
              {"deviator_type", rep.deviator_type},
              {"best_deviation", rep.best_deviation},
              {"gain", rep.gain},
              {"gain_stderr", rep.gain_stderr},
              {"method", verify::to_string(rep.method)},
              {"tolerance", rep.tolerance}};
}

}  // namespace

GameConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  auto require = [&](const char* field) -> const json& {
    if (!j.contains(field)) throw ConfigError(std::string(field) + ": missing required field");
    return j.at(field);
  };

  const std::string mech_name = require("mechanism").get<std::string>();
  const auto mech = mechanism_from_string(mech_name);
  if (!mech) throw ConfigError("mechanism: unknown value \"" + mech_name + "\"");

  const int n = require("N").get<int>();
  const double reward = require("R").get<double>();
  const double cost = require("c").get<double>();
  const int top_k = j.contains("K") ? j.at("K").get<int>() : 0;

  if (info_setting(*mech) == InfoSetting::Full) {
    if (!j.contains("types")) throw ConfigError("types: required for full-information mechanisms");
    std::vector<double> types = j.at("types").get<std::vector<double>>();
    const bool sort_flag = j.contains("sort") && j.at("sort").get<bool>();
    if (sort_flag) std::sort(types.begin(), types.end(), std::greater<>());
    for (std::size_t i = 1; i < types.size(); ++i) {
      if (types[i] > types[i - 1] && !sort_flag)
        throw ConfigError("types: not sorted non-increasing (pass \"sort\": true to sort)");
    }
    return GameConfig::make(*mech, n, reward, cost, std::move(types), top_k);
  }
  if (!j.contains("distribution"))
    throw ConfigError("distribution: required for partial-information mechanisms");
  return GameConfig::make_partial(*mech, n, reward, cost, parse_distribution(j.at("distribution")),
                                  top_k);
}

GameConfig parse_config_file(const std::string& path) {
  return parse_config_json(read_file(path));
}

std::string outcome_to_json(const GameConfig& cfg, const fullinfo::EquilibriumOutcome& out) {
  json profiles = json::array();
  for (std::size_t i = 0; i < out.profiles.size(); ++i) {
    json p{{"actions", profile_to_json(out.profiles[i])}};
    if (i < out.certificates.size()) p["certificate_gain"] = out.certificates[i];
    profiles.push_back(std::move(p));
  }
  json j{{"mechanism", to_string(cfg.mechanism)},
         {"verdict", fullinfo::to_string(out.verdict)},
         {"profiles", std::move(profiles)},
         {"notes", out.notes}};
  return j.dump(2) + "\n";
}

std::string cutoff_to_json(const GameConfig& cfg, const partialinfo::CutoffEquilibrium& eq) {
  json j{{"mechanism", to_string(cfg.mechanism)},
         {"threshold", eq.threshold},
         {"residual", eq.residual},
         {"residual_stderr", eq.residual_stderr},
         {"seed", eq.seed},
         {"mc_samples", eq.mc_samples},
         {"notes", eq.notes}};
  return j.dump(2) + "\n";
}

std::string strategy_to_json(const GameConfig& cfg, const partialinfo::SymmetricStrategy& strat) {
  json segments = json::array();
  for (const auto& s : strat.segments()) {
    segments.push_back(json{{"lo", s.lo},
                            {"hi", s.hi},
                            {"kind", partialinfo::to_string(s.kind)},
                            {"offset", s.offset}});
  }
  json grid = json::array();
  for (const auto& g : strat.grid()) grid.push_back(json::array({g[0], g[1]}));
  json j{{"mechanism", to_string(cfg.mechanism)},
         {"segments", std::move(segments)},
         {"grid", std::move(grid)},
         {"fallback_pin_used", strat.fallback_pin_used()}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const verify::DeviationReport& rep) {
  return report_json(rep).dump(2) + "\n";
}

std::string scan_to_json(const verify::ScanResult& scan, double step) {
  json j{{"nonexistence", scan.nonexistence},
         {"step", step},
         {"profiles_scanned", scan.witnesses.size()},
         {"notes", scan.notes}};
  if (scan.stable_profile) j["stable_profile"] = profile_to_json(*scan.stable_profile);
  return j.dump(2) + "\n";
}

std::string profiles_to_json(const std::vector<ActionProfile>& profiles) {
  json arr = json::array();
  for (const auto& p : profiles) arr.push_back(json{{"actions", profile_to_json(p)}});
  json j{{"profiles", std::move(arr)}};
  return j.dump(2) + "\n";
}

std::vector<ActionProfile> parse_profiles_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("profile: malformed JSON: ") + e.what());
  }
  std::vector<ActionProfile> out;
  if (j.contains("actions")) {
    out.push_back(ActionProfile{j.at("actions").get<std::vector<double>>()});
  } else if (j.contains("profiles")) {
    for (const auto& p : j.at("profiles"))
      out.push_back(ActionProfile{p.at("actions").get<std::vector<double>>()});
  } else {
    throw ConfigError("profile: expected \"actions\" or \"profiles\"");
  }
  return out;
}

double parse_threshold_file(const std::string& path) {
  json j = json::parse(read_file(path));
  if (!j.contains("threshold")) throw ConfigError("strategy: expected a \"threshold\" field");
  return j.at("threshold").get<double>();
}

partialinfo::SymmetricStrategy parse_strategy_file(const std::string& path) {
  json j = json::parse(read_file(path));
  if (!j.contains("segments") || !j.contains("grid"))
    throw ConfigError("strategy: expected \"segments\" and \"grid\" fields");
  std::vector<partialinfo::SymmetricStrategy::Segment> segments;
  for (const auto& s : j.at("segments")) {
    partialinfo::SymmetricStrategy::Segment seg;
    seg.lo = s.at("lo").get<double>();
    seg.hi = s.at("hi").get<double>();
    seg.offset = s.value("offset", 0.0);
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "original-beta") seg.kind = partialinfo::SegmentKind::OriginalBeta;
    else if (kind == "diagonal") seg.kind = partialinfo::SegmentKind::Diagonal;
    else if (kind == "shifted-beta") seg.kind = partialinfo::SegmentKind::ShiftedBeta;
    else throw ConfigError("strategy: unknown segment kind \"" + kind + "\"");
    segments.push_back(seg);
  }
  std::vector<std::array<double, 2>> grid;
  for (const auto& g : j.at("grid")) grid.push_back({g[0].get<double>(), g[1].get<double>()});
  return partialinfo::SymmetricStrategy::from_grid(std::move(segments), std::move(grid),
                                                   j.value("fallback_pin_used", false));
}

std::string format_double(double v) {
  return json(v).dump();  // shortest round-trip text, stable across runs
}

std::string strategy_to_csv(const partialinfo::SymmetricStrategy& strat) {
  std::ostringstream os;
  os << "x,beta_star,segment_kind\n";
  for (const auto& g : strat.grid()) {
    os << format_double(g[0]) << ',' << format_double(g[1]) << ','
       << partialinfo::to_string(strat.kind_at(g[0])) << '\n';
  }
  return os.str();
}

std::string trajectory_to_csv(const std::vector<ActionProfile>& trajectory) {
  std::ostringstream os;
  os << "iter";
  if (!trajectory.empty())
    for (std::size_t i = 0; i < trajectory.front().actions.size(); ++i) os << ",x" << (i + 1);
  os << '\n';
  for (std::size_t it = 0; it < trajectory.size(); ++it) {
    os << it;
    for (double x : trajectory[it].actions) os << ',' << format_double(x);
    os << '\n';
  }
  return os.str();
}

namespace {

constexpr int kSvgSize = 520;
constexpr int kMargin = 60;

double px(double v) { return kMargin + v * (kSvgSize - 2 * kMargin); }
double py(double v) { return kSvgSize - kMargin - v * (kSvgSize - 2 * kMargin); }

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kind_color(partialinfo::SegmentKind k) {
  switch (k) {
    case partialinfo::SegmentKind::OriginalBeta: return "#1f77b4";
    case partialinfo::SegmentKind::Diagonal: return "#d62728";
    case partialinfo::SegmentKind::ShiftedBeta: return "#2ca02c";
  }
  return "#000000";
}

}  // namespace

std::string strategy_to_svg(const partialinfo::SymmetricStrategy& strat) {
  const auto& grid = strat.grid();
  if (grid.empty()) throw std::invalid_argument("strategy_to_svg: empty strategy grid");

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\""
     << kSvgSize << "\" viewBox=\"0 0 " << kSvgSize << " " << kSvgSize << "\">\n";
  os << "  <rect width=\"" << kSvgSize << "\" height=\"" << kSvgSize << "\" fill=\"white\"/>\n";
  os << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
     << kSvgSize - 2 * kMargin << "\" height=\"" << kSvgSize - 2 * kMargin
     << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  // dashed diagonal reference
  os << "  <line x1=\"" << coord(px(0)) << "\" y1=\"" << coord(py(0)) << "\" x2=\""
     << coord(px(1)) << "\" y2=\"" << coord(py(1))
     << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";

  // one polyline per run of equal segment kind; runs share boundary points
  std::size_t i = 0;
  while (i + 1 < grid.size()) {
    const auto kind = strat.kind_at(0.5 * (grid[i][0] + grid[i + 1][0]));
    std::ostringstream pts;
    std::size_t j = i;
    for (; j + 1 < grid.size(); ++j) {
      const auto k2 = strat.kind_at(0.5 * (grid[j][0] + grid[j + 1][0]));
      if (k2 != kind) break;
      pts << coord(px(grid[j][0])) << ',' << coord(py(grid[j][1])) << ' ';
    }
    pts << coord(px(grid[j][0])) << ',' << coord(py(grid[j][1]));
    os << "  <polyline fill=\"none\" stroke=\"" << kind_color(kind) << "\" stroke-width=\"2\" points=\""
       << pts.str() << "\"/>\n";
    i = j;
  }

  // axis labels and legend
  os << "  <text x=\"" << coord(px(0.5)) << "\" y=\"" << kSvgSize - 18
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">type x</text>\n";
  os << "  <text x=\"18\" y=\"" << coord(py(0.5))
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 "
     << coord(py(0.5)) << ")\">contributed quality</text>\n";
  for (double tick : {0.0, 0.5, 1.0}) {
    os << "  <text x=\"" << coord(px(tick)) << "\" y=\"" << kSvgSize - kMargin + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick
       << "</text>\n";
    os << "  <text x=\"" << kMargin - 10 << "\" y=\"" << coord(py(tick) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick
       << "</text>\n";
  }
  const std::pair<partialinfo::SegmentKind, const char*> legend[] = {
      {partialinfo::SegmentKind::OriginalBeta, "original-beta"},
      {partialinfo::SegmentKind::Diagonal, "diagonal"},
      {partialinfo::SegmentKind::ShiftedBeta, "shifted-beta"},
  };
  int row = 0;
  for (const auto& [kind, label] : legend) {
    const int y = kMargin + 16 + 18 * row++;
    os << "  <line x1=\"" << kMargin + 10 << "\" y1=\"" << y << "\" x2=\"" << kMargin + 34
       << "\" y2=\"" << y << "\" stroke=\"" << kind_color(kind) << "\" stroke-width=\"2\"/>\n";
    os << "  <text x=\"" << kMargin + 40 << "\" y=\"" << y + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ugc::io
