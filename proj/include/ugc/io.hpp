#pragma once

#include <string>
#include <vector>

#include "ugc/core.hpp"
#include "ugc/fullinfo.hpp"
#include "ugc/partialinfo.hpp"
#include "ugc/verify.hpp"

namespace ugc::io {

// JSON config document:
//   {"mechanism":"M3","N":3,"R":4,"c":1,"types":[0.9,0.5,0.2]}
//   {"mechanism":"M6","N":11,"K":5,"R":8,"c":1,"distribution":{"kind":"uniform"}}
// Unsorted types are rejected unless "sort": true is present. Piecewise
// distributions use {"kind":"piecewise","knots":[[x,F],...]}.
GameConfig parse_config_json(const std::string& json_text);
GameConfig parse_config_file(const std::string& path);

std::string outcome_to_json(const GameConfig& cfg, const fullinfo::EquilibriumOutcome& out);
std::string cutoff_to_json(const GameConfig& cfg, const partialinfo::CutoffEquilibrium& eq);
std::string strategy_to_json(const GameConfig& cfg, const partialinfo::SymmetricStrategy& strat);
std::string report_to_json(const verify::DeviationReport& rep);
std::string scan_to_json(const verify::ScanResult& scan, double step);
std::string profiles_to_json(const std::vector<ActionProfile>& profiles);

// Accepts {"actions":[...]} or any solve output carrying "profiles".
std::vector<ActionProfile> parse_profiles_file(const std::string& path);
// Cutoff threshold from a solve output ({"threshold":...}).
double parse_threshold_file(const std::string& path);
// Strategy from a solve output ({"segments":[...],"grid":[[x,y],...]}).
partialinfo::SymmetricStrategy parse_strategy_file(const std::string& path);

// curve CSV: columns x,beta_star,segment_kind
std::string strategy_to_csv(const partialinfo::SymmetricStrategy& strat);
// dynamics CSV: columns iter,x1..xN
std::string trajectory_to_csv(const std::vector<ActionProfile>& trajectory);
// Standalone SVG: strategy polyline split by segment kind, dashed diagonal
// reference, colour legend. Throws on an empty grid.
std::string strategy_to_svg(const partialinfo::SymmetricStrategy& strat);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
std::string format_double(double v);  // shortest %.17g round-trip text

}  // namespace ugc::io
