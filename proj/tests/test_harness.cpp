#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "trigroup/harness.hpp"
#include "trigroup/rng.hpp"

using namespace trigroup;

namespace {

Presentation with_relations(std::uint32_t n, std::size_t t) {
    std::vector<Word> words;
    for (WordIndex i = 0; i < t; ++i) words.push_back(decode_word(n, i));
    return Presentation(n, words);
}

}  // namespace

TEST_CASE("Euler characteristic") {
    const auto e = euler_characteristic(with_relations(100, 150));
    CHECK(e.chi == 51);
    CHECK(e.witness);
    CHECK(e.assumption_in_range);
    CHECK(EulerWitness::kAssumes == "aspherical-presentation-complex(density<1/2)");

    const auto none = euler_characteristic(Presentation(5, {}));
    CHECK(none.chi == -4);
    CHECK_FALSE(none.witness);
    CHECK(std::isinf(none.density));

    const auto edge = euler_characteristic(with_relations(10, 9));
    CHECK(edge.chi == 0);
    CHECK_FALSE(edge.witness);

    // density ln t / (3 ln n) reaches 1/2 at t = n^1.5 = 1000.
    CHECK(euler_characteristic(with_relations(100, 999)).assumption_in_range);
    CHECK_FALSE(euler_characteristic(with_relations(100, 1001)).assumption_in_range);
}

TEST_CASE("chi plus n minus one equals t") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::uint32_t n = 2 + seed % 30;
        const auto pres = sample_binomial(n, 2.0 / (double(n) * n), seed);
        const auto e = euler_characteristic(pres);
        REQUIRE(e.chi + n - 1 == static_cast<std::int64_t>(pres.relation_count()));
    }
}

TEST_CASE("isolated generators") {
    const auto iso = find_isolated_generators(Presentation(4, {Word(g(1), G(2), g(1))}));
    CHECK(iso.generators == std::vector<Generator>{3, 4});
    CHECK(iso.witness);
    CHECK(IsolatedWitness::kAssumes == "nontrivial-generators(density<4/9)");

    CHECK(find_isolated_generators(Presentation(3, {})).generators.size() == 3);
    CHECK_FALSE(find_isolated_generators(Presentation(3, {Word(g(1), g(2), G(3))})).witness);

    // Brute-force oracle over random presentations.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pres = sample_binomial(40, 0.3 / 1600.0 * double(seed % 10), seed);
        const auto got = find_isolated_generators(pres).generators;
        std::vector<Generator> expected;
        for (Generator s = 1; s <= 40; ++s) {
            bool touched = false;
            for (const auto& w : pres.relations()) touched = touched || w.occurrences(s) > 0;
            if (!touched) expected.push_back(s);
        }
        REQUIRE(got == expected);
    }
}

TEST_CASE("trial classification examples") {
    const auto empty = classify_trial(Presentation(3, {}));
    REQUIRE(empty.free_certified());
    CHECK(empty.free_certificate->rank == 3);
    CHECK_FALSE(empty.euler.witness);
    CHECK(empty.isolated.generators.size() == 3);
    CHECK(empty.t_status == TStatus::Inconclusive);
    CHECK_FALSE(empty.connected);

    const auto torsion = classify_trial(Presentation(1, {Word(g(1), g(1), g(1))}));
    CHECK_FALSE(torsion.free_certified());
    CHECK(torsion.stuck_residual == std::vector<RelationId>{0});
    CHECK(torsion.euler.chi == 1);
    CHECK(torsion.euler.witness);
    CHECK(torsion.connected);
    CHECK(torsion.lambda2 == doctest::Approx(2.0));
    CHECK(torsion.t_status == TStatus::Certified);

    TrialOptions skip;
    skip.run_spectra = false;
    const auto skipped = classify_trial(Presentation(1, {Word(g(1), g(1), g(1))}), skip);
    CHECK(skipped.t_status == TStatus::Skipped);
    CHECK(std::isnan(skipped.lambda2));
    CHECK(skipped.elapsed_ms == 0.0);
}

TEST_CASE("regression fixture at n = 50") {
    const double p = 30.0 * std::log(50.0) / 2500.0;
    const auto v = classify_trial(sample_binomial(50, p, 1));
    // Frozen after the first validated run.
    CHECK(v.t == 45818);
    CHECK_FALSE(v.free_certified());
    CHECK(v.euler.chi == 45769);
    CHECK(v.euler.witness);
    CHECK_FALSE(v.euler.assumption_in_range);
    CHECK_FALSE(v.isolated.witness);
    CHECK(v.connected);
    CHECK(v.t_status == TStatus::Certified);
    CHECK(std::abs(v.lambda2 - 0.97442174050527675) < 1e-9);
    CHECK_FALSE(v.error.has_value());
}

TEST_CASE("verdicts never conflict on random presentations") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const std::uint32_t n = 3 + seed % 20;
        const double c = 0.05 * double(seed % 40);
        const auto v = classify_trial(sample_binomial(n, c / (double(n) * n), seed));
        REQUIRE_FALSE((v.free_certified() && v.euler.witness));
        REQUIRE_FALSE((v.t_status == TStatus::Certified && v.isolated.witness));
        if (v.free_certified()) REQUIRE(v.free_certificate->rank == std::int64_t(n) - std::int64_t(v.t));
    }
}

TEST_CASE("verdict rendering") {
    const auto v = classify_trial(Presentation(3, {Word(g(1), g(2), g(3))}));
    const auto text = verdict_to_text(v);
    CHECK(text.find("free: certified, rank 2") != std::string::npos);
    CHECK(text.find("eliminate g1 using relation 1") != std::string::npos);
    CHECK(text.find("property (T): inconclusive") != std::string::npos);

    const auto doc = nlohmann::json::parse(verdict_to_json(v));
    CHECK(doc["free"]["status"] == "certified");
    CHECK(doc["free"]["certificate"]["rank"] == 2);
    CHECK(doc["not_free_witness"]["chi"] == -1);
    CHECK(doc["not_t_witness"]["assumes"] == "nontrivial-generators(density<4/9)");
    CHECK(doc["t_cert"]["status"] == "inconclusive");
    CHECK(doc["error"].is_null());
}

TEST_CASE("p-expressions") {
    const auto a = PExpression::parse("4/n^2");
    CHECK(a.shape() == PExpression::Shape::OverNSquared);
    CHECK(a.evaluate(200) == doctest::Approx(1e-4));

    const auto b = PExpression::parse(" 0.02*log(n)/n^2 ");
    CHECK(b.shape() == PExpression::Shape::LogOverNSquared);
    CHECK(b.coefficient() == doctest::Approx(0.02));
    CHECK(b.evaluate(500) == doctest::Approx(0.02 * std::log(500.0) / 250000.0));
    CHECK(b.text() == "0.02*log(n)/n^2");

    CHECK(PExpression::parse("log(n)/n^2").coefficient() == 1.0);
    CHECK(PExpression::parse("abs:0.25").evaluate(7) == 0.25);

    for (const char* bad : {"", "4/n^3", "x/n^2", "2log(n)/n^2", "abs:", "abs:nan", "0.1"}) {
        CHECK_THROWS_AS(PExpression::parse(bad), std::invalid_argument);
    }
}

TEST_CASE("sweep config parsing") {
    const auto cfg = parse_sweep_config(
        "# grid\n"
        "master_seed = 42\n"
        "tol = 1e-9\n"
        "threads = 3\n"
        "cell = n=100 p=0.01/n^2 trials=200\n"
        "cell = n=200 p=4/n^2 trials=5 spectra=off\n"
        "output = out.csv\n");
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.tol == 1e-9);
    CHECK(cfg.threads == 3);
    CHECK(cfg.output == "out.csv");
    REQUIRE(cfg.grid.size() == 2);
    CHECK(cfg.grid[0].n == 100);
    CHECK(cfg.grid[0].trials == 200);
    CHECK(cfg.grid[0].spectra);
    CHECK_FALSE(cfg.grid[1].spectra);

    CHECK_THROWS_AS(parse_sweep_config("cell = n=10 trials=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("colour = red\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("cell = n=2 p=abs:1.5 trials=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("cell = n=2 p=5/n^2 trials=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("cell = n=-3 p=1/n^2 trials=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("tol = 0\n"), std::invalid_argument);
}

TEST_CASE("sweep with no trials writes only the header") {
    const auto cfg = parse_sweep_config("cell = n=10 p=1/n^2 trials=0\n");
    const auto result = run_sweep(cfg);
    CHECK(result.rows.empty());
    CHECK(sweep_csv(result) == std::string(kCsvHeader) + "\n");
    CHECK(result.summaries.size() == 1);
}

TEST_CASE("sweep is deterministic across thread counts") {
    const char* text =
        "master_seed = 7\n"
        "cell = n=30 p=0.05/n^2 trials=20\n"
        "cell = n=20 p=3*log(n)/n^2 trials=10\n"
        "cell = n=40 p=8/n^2 trials=10 spectra=off\n";
    auto cfg = parse_sweep_config(text);
    const auto serial = sweep_csv(run_sweep(cfg));
    CHECK(serial == sweep_csv(run_sweep(cfg)));
    cfg.threads = 4;
    CHECK(serial == sweep_csv(run_sweep(cfg)));

    const auto result = run_sweep(cfg);
    REQUIRE(result.rows.size() == 40);
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const auto& row = result.rows[k];
        CHECK(row.seed == trial_seed(7, row.cell, row.trial));
        if (k > 0) {
            const auto& prev = result.rows[k - 1];
            CHECK(std::pair(prev.cell, prev.trial) < std::pair(row.cell, row.trial));
        }
        // Each row can be rebuilt from its seed alone.
        const auto again = classify_trial(sample_binomial(row.verdict.n, row.p, row.seed),
                                          {.run_spectra = row.cell != 2});
        CHECK(again.t == row.verdict.t);
        CHECK(again.free_certificate == row.verdict.free_certificate);
    }

    cfg.master_seed = 8;
    CHECK(serial != sweep_csv(run_sweep(cfg)));
}

TEST_CASE("csv rows") {
    SweepRow row;
    row.p = 0.5;
    row.seed = 9;
    row.verdict = classify_trial(Presentation(1, {Word(g(1), g(1), g(1))}));
    row.verdict.error = "bad, worse\nworst";
    const auto line = csv_row(row);
    CHECK(line.rfind("1,0.5,9,0,1,inconclusive,,1,1,0,1,", 0) == 0);
    CHECK(line.find(",certified,1,0,bad; worse;worst,0.000\n") != std::string::npos);
    CHECK(std::count(line.begin(), line.end(), ',') == std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
}
