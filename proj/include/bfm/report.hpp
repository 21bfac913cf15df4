#pragma once

#include <string>

#include "bfm/scenario.hpp"

namespace bfm {

struct ScenarioTotals {
    double blue_infantry = 0.0;
    double red_infantry = 0.0;
    int blue_guns = 0;
    int red_guns = 0;
    int blue_units = 0;
    int red_units = 0;
};
ScenarioTotals scenario_totals(const Scenario& s);

/// Human-readable validation report: grid, overlay range, force totals,
/// stability margin and parameters. Also initialises every formation so
/// packing errors surface here.
std::string validation_report(const Scenario& s);

}  // namespace bfm
