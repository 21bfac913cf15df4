#pragma once

#include <memory>

#include "bfm/scenario.hpp"

namespace bfm::testing {

inline std::shared_ptr<const TerrainMap> flat_terrain(int nx, int ny, double ds, Vec2 origin = {}) {
    auto map = std::make_shared<TerrainMap>();
    map->grid = Grid{nx, ny, ds, origin};
    map->elevation = Field(map->grid, 0.0);
    map->overlay = Field(map->grid, 1.0);
    return map;
}

inline UnitSeed block_unit(int id, Side side, Vec2 center, double width, double depth, double strength,
                           double bearing = 0.0) {
    UnitSeed u;
    u.id = id;
    u.side = side;
    u.label = std::string(side_name(side)) + "-" + std::to_string(id);
    u.formation = FormationSpec{center, width, depth, bearing, strength};
    return u;
}

inline Scenario small_scenario(std::shared_ptr<const TerrainMap> map, double duration, double dt = 1.0) {
    Scenario s;
    s.name = "test";
    s.terrain = std::move(map);
    s.dt = dt;
    s.duration = duration;
    s.snapshot_every = 0.0;
    return s;
}

}  // namespace bfm::testing
