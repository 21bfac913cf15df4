#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "bfm/ensemble.hpp"
#include "support.hpp"

using namespace bfm;
using namespace bfm::testing;
namespace fs = std::filesystem;

namespace {

Scenario skirmish(double duration) {
    Scenario s = small_scenario(flat_terrain(48, 32, 8.0), duration);
    UnitSeed b = block_unit(1, Side::Blue, {250, 128}, 80, 40, 500, kPi);
    b.orders = {WaitUntilEnemyWithin{150}, FaceNearestEnemy{}};
    UnitSeed r = block_unit(2, Side::Red, {120, 128}, 80, 40, 600);
    r.morale = 0.8;
    r.orders = {TranslateTo{{190, 128}}, FaceNearestEnemy{}};
    s.units = {b, r};
    ArtilleryUnit a;
    a.id = 3;
    a.side = Side::Blue;
    a.guns = 4;
    a.position = {300, 128};
    s.artillery = {a};
    return s;
}

}  // namespace

TEST_CASE("victory classification") {
    CHECK(classify(RetreatTally{1000, 500, 300}) == VictoryClass::ConclusiveUnion);
    CHECK(classify(RetreatTally{1000, 800, 50}) == VictoryClass::Confederate);
    CHECK(classify(RetreatTally{1000, 2000.0 / 3.0, 200}) == VictoryClass::ThinUnion);
    CHECK(classify(RetreatTally{1000, 0, 0}) == VictoryClass::ConclusiveUnion);
    // the two thresholds use different denominators
    CHECK(classify(RetreatTally{1000, 100, 50}) == VictoryClass::ConclusiveUnion);
    CHECK(classify(RetreatTally{1000, 900, 100}) == VictoryClass::Confederate);
}

TEST_CASE("aggregate partitions unity") {
    std::vector<CaseResult> same(7);
    for (auto& c : same) c.victory = VictoryClass::ThinUnion;
    const EnsembleSummary a = aggregate(same);
    CHECK(a.fractions[1] == 1.0);
    CHECK(a.fractions[0] + a.fractions[2] == 0.0);

    std::vector<CaseResult> mixed(10);
    for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k].victory = static_cast<VictoryClass>(k % 3);
    const EnsembleSummary m = aggregate(mixed);
    CHECK(std::abs(m.fractions[0] + m.fractions[1] + m.fractions[2] - 1.0) <= 1e-12);
    CHECK(m.counts[0] == 4);
}

TEST_CASE("perturbations are seeded by the case id") {
    const Scenario base = skirmish(10.0);
    const PerturbedScenario zero = perturb_scenario(base, 0);
    CHECK(zero.scenario.units[0].formation.center == base.units[0].formation.center);
    CHECK(zero.combat.closein == 1.0);

    const PerturbedScenario a = perturb_scenario(base, 777), b = perturb_scenario(base, 777);
    CHECK(a.scenario.units[1].formation.center == b.scenario.units[1].formation.center);
    CHECK(a.scenario.units[1].formation.strength == b.scenario.units[1].formation.strength);
    CHECK(a.scenario.artillery[0].position == b.scenario.artillery[0].position);
    CHECK(a.combat.ranged == b.combat.ranged);
    CHECK_FALSE(a.scenario.units[1].formation.center == base.units[1].formation.center);

    double sum = 0.0;
    for (long k = 1; k <= 1000; ++k) {
        const PerturbedScenario p = perturb_scenario(base, k);
        const double m = p.scenario.units[0].formation.strength / base.units[0].formation.strength;
        REQUIRE(m >= 0.8);
        REQUIRE(m < 1.2);
        REQUIRE(p.combat.closein >= 0.5);
        REQUIRE(p.combat.range < 2.0);
        sum += m;
    }
    CHECK(sum / 1000.0 >= 0.99);
    CHECK(sum / 1000.0 <= 1.01);
}

TEST_CASE("ensemble writes its tables and resumes") {
    const fs::path dir = fs::temp_directory_path() / ("bfm-ens-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    const Scenario base = skirmish(120.0);
    EnsembleOptions opt;
    opt.first = 0;
    opt.last = 2;
    const EnsembleReport first = run_ensemble(base, dir, opt);
    CHECK(first.results.size() == 3);
    CHECK(first.reused == 0);
    CHECK(first.failed.empty());
    for (const char* f : {"summary.csv", "classes.csv", "histories.csv"}) CHECK(fs::exists(dir / f));

    opt.last = 3;
    const EnsembleReport second = run_ensemble(base, dir, opt);
    CHECK(second.results.size() == 4);
    CHECK(second.reused == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(second.results[k].victory == first.results[k].victory);
        CHECK(second.results[k].blue_final == doctest::Approx(first.results[k].blue_final).epsilon(1e-12));
    }
    fs::remove_all(dir);
}
