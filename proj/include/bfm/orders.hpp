#pragma once

#include <variant>
#include <vector>

#include "bfm/grid.hpp"

namespace bfm {

// Bearings are radians, counter-clockwise from east.

struct WaitUntilEnemyWithin { double range = 500.0; };
struct RotateTo { double bearing = 0.0; };
struct TranslateTo { Vec2 point{}; };
struct FaceNearestEnemy {};
/// Combined translation and rotation, completing when both have arrived.
struct Flank {
    Vec2 point{};
    double bearing = 0.0;
};

using Order = std::variant<WaitUntilEnemyWithin, RotateTo, TranslateTo, FaceNearestEnemy, Flank>;
using OrderList = std::vector<Order>;

const char* order_name(const Order& o);

}  // namespace bfm
