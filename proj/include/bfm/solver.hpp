#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bfm/advection.hpp"
#include "bfm/combat.hpp"
#include "bfm/kernels.hpp"
#include "bfm/scenario.hpp"
#include "bfm/units.hpp"

namespace bfm {

struct SolverOptions {
    int tiles = 1;  // horizontal row bands processed concurrently
    /// Cells added around each unit's density support to form the region
    /// updated each step. Support grows by at most two cells per step, so
    /// anything >= 2 leaves density exact; identity outside stays frozen.
    int window_margin = 6;
    const kernels::KernelTable* kernels = nullptr;  // null: kernels::active()
};

struct RunEvent {
    double time = 0.0;
    int unit = 0;
    std::string kind;    // retreat, press, destroyed, order
    std::string detail;  // order name for order completions, pursuit target for press
};

struct UnitOutcome {
    int id = 0;
    Side side = Side::Red;
    std::string label;
    double initial_strength = 0.0;
    double final_strength = 0.0;
    double closein_casualties = 0.0;
    double ranged_casualties = 0.0;
    double dispersed = 0.0;     // remnant removed when the unit was destroyed
    double clamped_mass = 0.0;  // net mass added by clamping negatives and flushing sub-floor cells
    UnitStatus status = UnitStatus::Active;
    double status_time = -1.0;
    double morale = 0.0;

    double casualties() const { return closein_casualties + ranged_casualties + dispersed; }
};

struct RunResult {
    std::string scenario;
    double dt = 1.0;
    std::vector<double> times;                     // one entry per recorded step, t = 0 first
    std::vector<std::vector<double>> strength;     // [record][unit]
    std::vector<std::vector<double>> casualties;   // cumulative, [record][unit]
    std::vector<UnitOutcome> units;
    std::vector<RunEvent> events;

    double side_casualties(Side s) const;
    double side_initial(Side s) const;
    double side_final(Side s) const;
    int side_retreating(Side s) const;
    int side_units(Side s) const;
};

class TileExecutor;

/// Time integration of a scenario. Each step runs the serial command phase
/// (summaries, morale, orders, targeting) and then a two-stage midpoint
/// update of every unit's density and identity with combat sinks evaluated
/// at each stage.
class Simulation {
public:
    explicit Simulation(const Scenario& scenario, SolverOptions options = {});
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void step();
    double time() const { return time_; }
    long step_index() const { return step_; }

    const Scenario& scenario() const { return scenario_; }
    std::size_t unit_count() const { return units_.size(); }
    const UnitState& unit(std::size_t k) const;
    const std::vector<UnitSummary>& summaries() const { return summaries_; }
    const std::vector<TargetAssignment>& assignments() const { return assignments_; }
    const Field& artillery_density() const { return artillery_total_; }
    const CellBox& window(std::size_t k) const;
    double strength(std::size_t k) const;
    UnitOutcome outcome(std::size_t k) const;
    const std::vector<RunEvent>& events() const { return events_; }
    const kernels::KernelTable& kernels() const { return *kernels_; }

    /// Sum of all flow-unit densities of one side.
    Field side_density(Side s) const;

private:
    struct Unit;
    struct TileScratch;
    enum class Stage { Predict, Correct };

    void command_phase();
    void refresh_summaries();
    void build_totals(const std::vector<const Field*>& rho);
    void field_stage(Stage stage);
    void update_region(Unit& u, std::size_t k, const CellBox& region, Stage stage, TileScratch& s);
    void reduce_stage(Stage stage);
    void record_event(int unit, std::string kind, std::string detail = {});

    Scenario scenario_;
    SolverOptions options_;
    const kernels::KernelTable* kernels_;
    std::vector<std::unique_ptr<Unit>> units_;
    std::vector<UnitSummary> summaries_;
    std::vector<TargetAssignment> assignments_;
    std::vector<RunEvent> events_;
    Field artillery_total_;
    Field total_;               // stage total density incl. artillery obstacles
    Field weighted_[2];         // k-weighted density of each side (index by Side)
    ElevationGradient slope_;
    BoundaryTaper taper_;
    KinematicsParams kin_;
    std::vector<std::pair<int, int>> bands_;  // row range per tile
    std::vector<std::unique_ptr<TileScratch>> scratch_;
    std::unique_ptr<TileExecutor> executor_;
    double time_ = 0.0;
    long step_ = 0;
};

/// Observer called at t = 0, at every snapshot time and after the last step.
using SnapshotCallback = std::function<void(const Simulation&)>;

RunResult run(const Scenario& scenario, const SolverOptions& options = {}, const SnapshotCallback& on_snapshot = {});

}  // namespace bfm
