#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcim/map_model.hpp"

namespace pcim {

/// Map-spec document: endpoints[], branches[{slope,intercept}], open_ends[2],
/// optional lambda. All rationals are "p/q" strings; decimal literals are
/// rejected to preserve exactness.
RawMapSpec parse_map_spec(const nlohmann::json& doc);
RawMapSpec load_map_spec(const std::string& path);

nlohmann::ordered_json map_spec_to_json(const RawMapSpec& raw);
void save_map_spec(const RawMapSpec& raw, const std::string& path);

/// Bundled example maps, each passing validation: the two halving branches,
/// the 9/10-slope wrap pair, a four-piece injective map with mixed slopes, and
/// a six-piece continuous zig-zag whose extrema sit on piece boundaries.
std::vector<std::pair<std::string, RawMapSpec>> gallery();

}  // namespace pcim
