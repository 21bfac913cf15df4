#include "bfm/ensemble.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "bfm/error.hpp"
#include "bfm/output.hpp"
#include "bfm/rng.hpp"

namespace bfm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Vec2 clamp_to_map(Vec2 p, const Grid& g, double inset) {
    const double mx = inset * g.width();
    const double my = inset * g.height();
    return {std::clamp(p.x, g.origin.x + mx, g.origin.x + g.width() - mx),
            std::clamp(p.y, g.origin.y + my, g.origin.y + g.height() - my)};
}

}  // namespace

PerturbedScenario perturb_scenario(const Scenario& base, long case_id, const PerturbationSpec& spec) {
    PerturbedScenario out{base, {}, {}};
    if (case_id == 0) return out;
    Scenario& s = out.scenario;
    const Grid& g = s.grid();
    constexpr double kInset = 0.05;
    Pcg64 rng(static_cast<std::uint64_t>(case_id));
    auto unit_band = [&] { return rng.uniform(spec.unit_low, spec.unit_high); };

    std::vector<std::size_t> order(s.units.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.units[a].id < s.units[b].id; });
    for (std::size_t k : order) {
        UnitSeed& u = s.units[k];
        FormationSpec& f = u.formation;
        const double dx = rng.normal(0.0, spec.position_sigma);
        const double dy = rng.normal(0.0, spec.position_sigma);
        const Vec2 moved = f.center + Vec2{dx, dy};
        f.center = clamp_to_map(moved, g, kInset);
        if (!(f.center == moved)) out.notes.push_back("unit " + std::to_string(u.id) + ": centre clamped onto the map");
        f.bearing += rng.normal(0.0, spec.bearing_sigma);
        for (Order& o : u.orders) {
            if (auto* t = std::get_if<TranslateTo>(&o)) {
                const double ox = rng.normal(0.0, spec.position_sigma);
                const double oy = rng.normal(0.0, spec.position_sigma);
                t->point = clamp_to_map(t->point + Vec2{ox, oy}, g, kInset);
            } else if (auto* r = std::get_if<RotateTo>(&o)) {
                r->bearing += rng.normal(0.0, spec.bearing_sigma);
            } else if (auto* fl = std::get_if<Flank>(&o)) {
                const double ox = rng.normal(0.0, spec.position_sigma);
                const double oy = rng.normal(0.0, spec.position_sigma);
                fl->point = clamp_to_map(fl->point + Vec2{ox, oy}, g, kInset);
                fl->bearing += rng.normal(0.0, spec.bearing_sigma);
            }
        }
        double wa = unit_band();
        double db = unit_band();
        const double morale = unit_band();
        const double strength = unit_band();
        const double march = unit_band();
        const double persons = f.strength * strength;
        auto packed = [&] { return persons / (f.width * wa * f.depth * db) > s.params.max_density; };
        for (int tries = 0; packed() && tries < spec.shape_retries; ++tries) {
            out.notes.push_back("unit " + std::to_string(u.id) + ": shape redrawn (too dense)");
            wa = unit_band();
            db = unit_band();
        }
        if (packed()) {
            const double grow = std::sqrt(persons / (f.width * wa * f.depth * db * s.params.max_density)) * 1.01;
            wa *= grow;
            db *= grow;
            out.notes.push_back("unit " + std::to_string(u.id) + ": shape enlarged to fit the density cap");
        }
        f.width *= wa;
        f.depth *= db;
        u.morale *= morale;
        f.strength = persons;
        u.march_speed *= march;
    }

    std::vector<std::size_t> arts(s.artillery.size());
    std::iota(arts.begin(), arts.end(), 0);
    std::sort(arts.begin(), arts.end(), [&](std::size_t a, std::size_t b) { return s.artillery[a].id < s.artillery[b].id; });
    for (std::size_t k : arts) {
        ArtilleryUnit& a = s.artillery[k];
        const double dx = rng.normal(0.0, spec.position_sigma);
        const double dy = rng.normal(0.0, spec.position_sigma);
        a.position = clamp_to_map(a.position + Vec2{dx, dy}, g, kInset);
    }

    out.combat.closein = rng.uniform(spec.combat_low, spec.combat_high);
    out.combat.ranged = rng.uniform(spec.combat_low, spec.combat_high);
    out.combat.range = rng.uniform(spec.combat_low, spec.combat_high);
    CombatParams& c = s.params.combat;
    c.closein_k *= out.combat.closein;
    c.ranged_k_infantry *= out.combat.ranged;
    c.ranged_k_artillery *= out.combat.ranged;
    c.range_infantry *= out.combat.range;
    c.range_artillery *= out.combat.range;
    return out;
}

const char* victory_name(VictoryClass v) {
    switch (v) {
        case VictoryClass::ConclusiveUnion: return "conclusive-union";
        case VictoryClass::ThinUnion: return "thin-union";
        case VictoryClass::Confederate: return "confederate";
    }
    return "?";
}

RetreatTally retreat_tally(const RunResult& r) {
    RetreatTally t;
    for (const auto& u : r.units) {
        if (u.side != Side::Red) continue;
        t.red_initial += u.initial_strength;
        t.red_survivors += u.final_strength;
        if (u.status == UnitStatus::Retreating) t.red_retreating += u.final_strength;
    }
    return t;
}

VictoryClass classify(const RetreatTally& t) {
    if (t.red_survivors <= 0.0) return VictoryClass::ConclusiveUnion;
    if (t.red_retreating >= 0.5 * t.red_survivors) return VictoryClass::ConclusiveUnion;
    if (t.red_retreating <= 0.1 * t.red_initial) return VictoryClass::Confederate;
    return VictoryClass::ThinUnion;
}

VictoryClass classify(const RunResult& r) { return classify(retreat_tally(r)); }

CaseResult summarize_case(long case_id, const RunResult& r, const CombatMultipliers& m, double every) {
    CaseResult c;
    c.case_id = case_id;
    c.tally = retreat_tally(r);
    c.victory = classify(c.tally);
    c.blue_initial = r.side_initial(Side::Blue);
    c.blue_final = r.side_final(Side::Blue);
    c.blue_casualties = r.side_casualties(Side::Blue);
    c.red_casualties = r.side_casualties(Side::Red);
    c.combat = m;
    const long stride = every > 0.0 ? std::max(1L, std::lround(every / r.dt)) : 1L;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != r.times.size()) continue;
        double blue = 0.0, red = 0.0;
        for (std::size_t u = 0; u < r.units.size(); ++u) {
            (r.units[u].side == Side::Blue ? blue : red) += r.strength[k][u];
        }
        c.times.push_back(r.times[k]);
        c.blue.push_back(blue);
        c.red.push_back(red);
    }
    return c;
}

EnsembleSummary aggregate(const std::vector<CaseResult>& results) {
    EnsembleSummary s;
    s.cases = results.size();
    for (const auto& r : results) ++s.counts[static_cast<std::size_t>(r.victory)];
    if (s.cases > 0) {
        for (std::size_t k = 0; k < 3; ++k) s.fractions[k] = static_cast<double>(s.counts[k]) / s.cases;
    }
    return s;
}

namespace {

json to_json(const CaseResult& c) {
    return json{{"case", c.case_id},
                {"class", victory_name(c.victory)},
                {"red_initial", c.tally.red_initial},
                {"red_survivors", c.tally.red_survivors},
                {"red_retreating", c.tally.red_retreating},
                {"blue_initial", c.blue_initial},
                {"blue_final", c.blue_final},
                {"blue_casualties", c.blue_casualties},
                {"red_casualties", c.red_casualties},
                {"multipliers", {{"k", c.combat.closein}, {"k_prime", c.combat.ranged}, {"r0", c.combat.range}}},
                {"history", {{"time", c.times}, {"blue", c.blue}, {"red", c.red}}}};
}

CaseResult from_json(const json& j) {
    CaseResult c;
    c.case_id = j.at("case").get<long>();
    c.tally.red_initial = j.at("red_initial");
    c.tally.red_survivors = j.at("red_survivors");
    c.tally.red_retreating = j.at("red_retreating");
    c.victory = classify(c.tally);
    c.blue_initial = j.at("blue_initial");
    c.blue_final = j.at("blue_final");
    c.blue_casualties = j.at("blue_casualties");
    c.red_casualties = j.at("red_casualties");
    const json& m = j.at("multipliers");
    c.combat = {m.at("k"), m.at("k_prime"), m.at("r0")};
    const json& h = j.at("history");
    c.times = h.at("time").get<std::vector<double>>();
    c.blue = h.at("blue").get<std::vector<double>>();
    c.red = h.at("red").get<std::vector<double>>();
    return c;
}

fs::path case_dir(const fs::path& dir, long id) {
    char name[32];
    std::snprintf(name, sizeof name, "case_%04ld", id);
    return dir / "cases" / name;
}

void write_tables(const fs::path& dir, const std::vector<CaseResult>& results, const EnsembleSummary& s) {
    std::ofstream sum(dir / "summary.csv");
    sum << std::setprecision(10);
    sum << "case,class,blue_initial,blue_final,red_initial,red_final,red_retreating,blue_casualties,red_casualties,"
           "k_mult,k_prime_mult,r0_mult\n";
    for (const auto& c : results) {
        sum << c.case_id << "," << victory_name(c.victory) << "," << c.blue_initial << "," << c.blue_final << ","
            << c.tally.red_initial << "," << c.tally.red_survivors << "," << c.tally.red_retreating << ","
            << c.blue_casualties << "," << c.red_casualties << "," << c.combat.closein << "," << c.combat.ranged
            << "," << c.combat.range << "\n";
    }
    std::ofstream cls(dir / "classes.csv");
    cls << "class,count,fraction\n";
    for (std::size_t k = 0; k < 3; ++k) {
        cls << victory_name(static_cast<VictoryClass>(k)) << "," << s.counts[k] << "," << s.fractions[k] << "\n";
    }
    std::ofstream hist(dir / "histories.csv");
    hist << std::setprecision(10) << "case,time,blue,red\n";
    for (const auto& c : results) {
        for (std::size_t k = 0; k < c.times.size(); ++k) {
            hist << c.case_id << "," << c.times[k] << "," << c.blue[k] << "," << c.red[k] << "\n";
        }
    }
}

}  // namespace

EnsembleReport run_ensemble(const Scenario& base, const fs::path& dir, const EnsembleOptions& opt,
                            const std::function<void(const CaseResult&)>& progress) {
    fs::create_directories(dir / "cases");
    EnsembleReport report;
    std::vector<long> todo;
    for (long id = opt.first; id <= opt.last; ++id) {
        const fs::path done = case_dir(dir, id) / "result.json";
        if (opt.resume && fs::exists(done)) {
            try {
                std::ifstream in(done);
                report.results.push_back(from_json(json::parse(in)));
                ++report.reused;
                continue;
            } catch (const std::exception&) {
                // unreadable leftovers from an interrupted write: rerun the case
            }
        }
        todo.push_back(id);
    }

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t n = next.fetch_add(1);
            if (n >= todo.size()) return;
            const long id = todo[n];
            try {
                const PerturbedScenario p = perturb_scenario(base, id, opt.perturbation);
                const RunResult r = run(p.scenario, opt.solver);
                const CaseResult c = summarize_case(id, r, p.combat, opt.history_every);
                const fs::path cd = case_dir(dir, id);
                fs::create_directories(cd);
                write_series_csv(cd / "strength.csv", r, r.strength, opt.history_every);
                write_events_csv(cd / "events.csv", r);
                json j = to_json(c);
                j["notes"] = p.notes;
                j["run"] = run_summary(r, p.scenario, id);
                {
                    // write then rename so a crash never leaves a partial result.json
                    std::ofstream out(cd / "result.json.tmp");
                    out << std::setw(2) << j << "\n";
                }
                fs::rename(cd / "result.json.tmp", cd / "result.json");
                std::lock_guard lock(mu);
                report.results.push_back(c);
                if (progress) progress(c);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                report.failed.push_back(id);
                report.errors.push_back("case " + std::to_string(id) + ": " + e.what());
            }
        }
    };
    const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(todo.size())));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(report.results.begin(), report.results.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.case_id < b.case_id; });
    std::sort(report.failed.begin(), report.failed.end());
    report.summary = aggregate(report.results);
    write_tables(dir, report.results, report.summary);
    return report;
}

EnsembleSpec load_ensemble_spec(const fs::path& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw InputError("cannot open " + path.string());
    } catch (const YAML::ParserException& e) {
        throw InputError(path.string() + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    auto fail = [&](const std::string& field, const std::string& msg) -> void {
        throw InputError(path.string() + ": " + field + ": " + msg);
    };
    EnsembleSpec spec;
    if (!root["scenario"]) fail("scenario", "missing required key");
    spec.scenario = root["scenario"].as<std::string>();
    if (spec.scenario.is_relative()) spec.scenario = path.parent_path() / spec.scenario;
    try {
        if (root["cases"]) spec.cases = root["cases"].as<long>();
        PerturbationSpec& p = spec.perturbation;
        if (root["position_sigma"]) p.position_sigma = root["position_sigma"].as<double>();
        if (root["bearing_sigma_deg"]) p.bearing_sigma = deg_to_rad(root["bearing_sigma_deg"].as<double>());
        if (const YAML::Node b = root["unit_band"]) {
            p.unit_low = b[0].as<double>();
            p.unit_high = b[1].as<double>();
        }
        if (const YAML::Node b = root["combat_band"]) {
            p.combat_low = b[0].as<double>();
            p.combat_high = b[1].as<double>();
        }
    } catch (const YAML::Exception& e) {
        fail("spec", e.what());
    }
    if (spec.cases < 1) fail("cases", "must be at least 1");
    return spec;
}

}  // namespace bfm
