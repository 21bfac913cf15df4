#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "bfm/scenario.hpp"
#include "bfm/solver.hpp"

namespace bfm {

struct PerturbationSpec {
    double position_sigma = 100.0;             // m
    double bearing_sigma = deg_to_rad(10.0);   // rad
    double unit_low = 0.8, unit_high = 1.2;    // shape, morale, strength, march speed
    double combat_low = 0.5, combat_high = 2.0;  // global k, k', R0
    int shape_retries = 10;
};

/// Global combat multipliers drawn for one case (all 1 for case 0).
struct CombatMultipliers {
    double closein = 1.0;
    double ranged = 1.0;
    double range = 1.0;
};

struct PerturbedScenario {
    Scenario scenario;
    CombatMultipliers combat;
    std::vector<std::string> notes;  // shape redraws and clamped positions
};

/// Case 0 returns the base scenario. Otherwise a PCG-64 stream seeded with
/// the case id is drawn in this fixed order:
///   flow units by ascending id: centre dx, dy; bearing; for each order a
///   point (dx, dy) and/or a bearing; width and depth multipliers; morale,
///   strength and march-speed multipliers;
///   batteries by ascending id: position dx, dy;
///   then the global k, k' and R0 multipliers.
/// A width/depth pair that packs above rho_m is redrawn (bounded).
PerturbedScenario perturb_scenario(const Scenario& base, long case_id, const PerturbationSpec& spec = {});

enum class VictoryClass { ConclusiveUnion, ThinUnion, Confederate };
const char* victory_name(VictoryClass v);

/// End-of-run quantities the classification depends on.
struct RetreatTally {
    double red_initial = 0.0;
    double red_survivors = 0.0;
    double red_retreating = 0.0;  // persons in retreating Red units
};
RetreatTally retreat_tally(const RunResult& r);

/// Retreating / survivors >= 0.5: conclusive Union victory; otherwise
/// retreating / initial Red <= 0.1: Confederate victory; otherwise thin
/// Union victory. No Red survivors counts as conclusive.
VictoryClass classify(const RetreatTally& t);
VictoryClass classify(const RunResult& r);

struct CaseResult {
    long case_id = 0;
    VictoryClass victory = VictoryClass::ThinUnion;
    RetreatTally tally;
    double blue_initial = 0.0, blue_final = 0.0;
    double blue_casualties = 0.0, red_casualties = 0.0;
    CombatMultipliers combat;
    std::vector<double> times;   // history at the snapshot cadence
    std::vector<double> blue;    // side totals
    std::vector<double> red;
};

CaseResult summarize_case(long case_id, const RunResult& r, const CombatMultipliers& m, double every);

struct EnsembleSummary {
    std::size_t cases = 0;
    std::array<double, 3> fractions{};  // indexed by VictoryClass
    std::array<std::size_t, 3> counts{};
};
EnsembleSummary aggregate(const std::vector<CaseResult>& results);

struct EnsembleOptions {
    long first = 0;
    long last = 99;   // inclusive
    int workers = 1;
    bool resume = true;
    PerturbationSpec perturbation;
    SolverOptions solver;
    double history_every = 60.0;
};

struct EnsembleReport {
    std::vector<CaseResult> results;   // sorted by case id
    std::vector<long> failed;
    std::vector<std::string> errors;
    std::size_t reused = 0;            // cases read back from an earlier run
    EnsembleSummary summary;
};

/// Runs (or resumes) cases into <dir>/cases/case_NNNN and writes
/// summary.csv, classes.csv and histories.csv. `progress` is called after
/// every finished case (from worker threads, serialised).
EnsembleReport run_ensemble(const Scenario& base, const std::filesystem::path& dir, const EnsembleOptions& opt,
                            const std::function<void(const CaseResult&)>& progress = {});

/// Ensemble spec file: base scenario path and perturbation bands.
struct EnsembleSpec {
    std::filesystem::path scenario;
    long cases = 100;
    PerturbationSpec perturbation;
};
EnsembleSpec load_ensemble_spec(const std::filesystem::path& path);

}  // namespace bfm
