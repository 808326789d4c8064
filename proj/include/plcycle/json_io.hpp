// JSON serialization for triangulations, cycles and result tables.
#pragma once

#include "json.hpp"

#include "plcycle/cycle.hpp"

namespace plcycle {

using json = nlohmann::ordered_json;

json triangulation_to_json(const Triangulation2D& tri);
Triangulation2D triangulation_from_json(const json& j);

json cycle_to_json(const GradientCycle& c);

json region_to_json(const RegionWithMultiplicities& region);

}  // namespace plcycle
