// bfm: validate scenarios, run single simulations and randomized ensembles.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <regex>
#include <thread>

#include "bfm/ensemble.hpp"
#include "bfm/error.hpp"
#include "bfm/output.hpp"
#include "bfm/report.hpp"
#include "bfm/scenario_io.hpp"
#include "bfm/solver.hpp"

namespace fs = std::filesystem;
using namespace bfm;

namespace {

bool parse_cases(const std::string& text, long& first, long& last) {
    static const std::regex re(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) return false;
    first = std::stol(m[1]);
    last = m[2].matched ? std::stol(m[2]) : first;
    return first <= last;
}

void apply_terrain_flag(Scenario& s, const std::string& terrain) {
    if (terrain == "on") s.terrain_effects = true;
    if (terrain == "off") s.terrain_effects = false;
}

int cmd_validate(const std::string& path) {
    const Scenario s = load_scenario(path);
    std::cout << validation_report(s);
    return 0;
}

int cmd_run(const std::string& path, const std::string& terrain, double snapshots, const std::string& out,
            int tiles) {
    Scenario s = load_scenario(path);
    apply_terrain_flag(s, terrain);
    if (snapshots >= 0.0) s.snapshot_every = snapshots;
    const fs::path dir = run_directory(output_root(out.empty() ? "runs" : out), s.name, 0);
    RunWriter writer(dir, s, 0, s.snapshot_every > 0.0);
    SolverOptions opt;
    opt.tiles = tiles;
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run(s, opt, [&](const Simulation& sim) { writer.snapshot(sim); });
    writer.finish(r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %ld steps in %.1f s (kernels %s, %d tile%s)\n", s.name.c_str(), s.steps(), secs,
                kernels::active().name, tiles, tiles == 1 ? "" : "s");
    for (Side side : {Side::Blue, Side::Red}) {
        std::printf("  %-4s initial %8.0f  final %8.0f  casualties %8.0f  retreating units %d/%d\n",
                    side_name(side), r.side_initial(side), r.side_final(side), r.side_casualties(side),
                    r.side_retreating(side), r.side_units(side));
    }
    std::printf("  class %s\n  output %s\n", victory_name(classify(r)), dir.string().c_str());
    return 0;
}

int cmd_ensemble(const std::string& spec_path, const std::string& scenario_path, const std::string& cases,
                 int workers, const std::string& out, int tiles, const std::string& terrain) {
    EnsembleSpec spec;
    if (!spec_path.empty()) spec = load_ensemble_spec(spec_path);
    if (!scenario_path.empty()) spec.scenario = scenario_path;
    if (spec.scenario.empty()) throw InputError("ensemble needs --spec or --scenario");
    Scenario base = load_scenario(spec.scenario);
    apply_terrain_flag(base, terrain);

    EnsembleOptions opt;
    opt.perturbation = spec.perturbation;
    opt.first = 0;
    opt.last = spec.cases - 1;
    if (!cases.empty() && !parse_cases(cases, opt.first, opt.last)) {
        throw InputError("--cases expects a..b with a <= b, got '" + cases + "'");
    }
    opt.workers = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    opt.solver.tiles = tiles;

    const fs::path dir = output_root(out.empty() ? "runs" : out) / (base.name + "-ensemble");
    std::mutex print;
    const EnsembleReport rep = run_ensemble(base, dir, opt, [&](const CaseResult& c) {
        std::printf("case %4ld  %-16s  blue %7.0f  red %7.0f  red retreating %7.0f\n", c.case_id,
                    victory_name(c.victory), c.blue_final, c.tally.red_survivors, c.tally.red_retreating);
        std::fflush(stdout);
    });
    std::printf("%zu cases (%zu reused)  conclusive-union %.3f  thin-union %.3f  confederate %.3f\n",
                rep.summary.cases, rep.reused, rep.summary.fractions[0], rep.summary.fractions[1],
                rep.summary.fractions[2]);
    std::printf("output %s\n", dir.string().c_str());
    if (!rep.failed.empty()) {
        std::fprintf(stderr, "%zu case(s) failed:", rep.failed.size());
        for (long id : rep.failed) std::fprintf(stderr, " %ld", id);
        std::fprintf(stderr, "\n");
        for (const auto& e : rep.errors) std::fprintf(stderr, "  %s\n", e.c_str());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuum battle-flow simulator"};
    app.require_subcommand(1);

    std::string scenario, terrain, out, cases, spec;
    double snapshots = -1.0;
    int tiles = 1, workers = 0;

    auto* validate = app.add_subcommand("validate", "Parse a scenario and report grid, forces and stability margin");
    validate->add_option("--scenario,scenario", scenario, "Scenario YAML")->required();

    auto* run = app.add_subcommand("run", "Run one simulation and write a run directory");
    run->add_option("--scenario,scenario", scenario, "Scenario YAML")->required();
    run->add_option("--terrain", terrain, "Elevation and overlay effects")->check(CLI::IsMember({"on", "off"}));
    run->add_flag_callback("--no-terrain", [&] { terrain = "off"; }, "Same as --terrain off");
    run->add_option("--snapshots", snapshots, "Snapshot cadence in seconds (0 disables)");
    run->add_option("--out", out, "Output root (BFM_OUT overrides)");
    run->add_option("--tiles", tiles, "Row bands processed in parallel")->check(CLI::PositiveNumber);

    auto* ens = app.add_subcommand("ensemble", "Run randomized cases and classify outcomes");
    ens->add_option("--spec", spec, "Ensemble spec YAML");
    ens->add_option("--scenario", scenario, "Base scenario (overrides the spec)");
    ens->add_option("--cases", cases, "Case range a..b (inclusive)");
    ens->add_option("--workers", workers, "Concurrent cases (default: all cores)");
    ens->add_option("--out", out, "Output root (BFM_OUT overrides)");
    ens->add_option("--tiles", tiles, "Row bands per case")->check(CLI::PositiveNumber);
    ens->add_option("--terrain", terrain, "Elevation and overlay effects")->check(CLI::IsMember({"on", "off"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(scenario);
        if (*run) return cmd_run(scenario, terrain, snapshots, out, tiles);
        if (*ens) return cmd_ensemble(spec, scenario, cases, workers, out, tiles, terrain);
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const CflError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const NonFiniteError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
