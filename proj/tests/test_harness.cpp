#include "doctest.h"

#include <cmath>
#include <sstream>

#include "orbitmc/exact.hpp"
#include "orbitmc/harness.hpp"

using namespace orbitmc;

namespace {

StudyConfig quick_config() {
    StudyConfig cfg;
    cfg.fiber.steps = 400;
    cfg.fiber.burn_in = 100;
    cfg.orbit.steps = 100;
    cfg.orbit.burn_in = 20;
    cfg.orbit.mc_total_budget = 2000;
    cfg.perm_budget = 2000;
    return cfg;
}

BiasRecord record_with(const Scenario& s, double b) {
    BiasRecord r{s};
    r.bias_fiber = b;
    r.bias_orbit = b;
    r.bias_perm = b;
    return r;
}

}  // namespace

TEST_CASE("error-study scenario grid") {
    const auto sc = table3_scenarios();
    REQUIRE(sc.size() == 9);
    CHECK(sc.front().n1 == 6);
    CHECK(sc.front().n2 == 4);
    CHECK(sc.back().n1 == 30);
    CHECK(sc.back().mu2 == 2.0);
    for (const auto& s : sc) CHECK(s.family.kind() == FamilyKind::poisson);
}

TEST_CASE("replicate seeds and data are reproducible") {
    CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
    CHECK(replicate_seed(1, 5) == replicate_seed(1, 5));
    const auto s = table3_scenarios()[0];
    const auto a = draw_replicate(s, 9);
    const auto b = draw_replicate(s, 9);
    CHECK(std::vector<int>(a.entries().begin(), a.entries().end()) ==
          std::vector<int>(b.entries().begin(), b.entries().end()));
    CHECK(a.n1() == 6);
    CHECK(a.size() == 10);
}

TEST_CASE("run_scenario records") {
    const auto s = table3_scenarios()[0];
    const auto cfg = quick_config();
    const auto a = run_scenario(s, 3, cfg, 21);
    const auto b = run_scenario(s, 3, cfg, 21);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bias_fiber == b[i].bias_fiber);
        CHECK(a[i].bias_orbit == b[i].bias_orbit);
        CHECK(a[i].bias_perm == b[i].bias_perm);
        CHECK(a[i].seed == b[i].seed);
        const auto cf = binomial_closed_form_cdf(static_cast<int>(a[i].t), s.n1, s.n2);
        CHECK(a[i].exact_reference == cf(a[i].u_obs));
        CHECK(std::abs(a[i].bias_orbit) <= 1.0);
    }
    CHECK_THROWS_AS(run_scenario(s, 0, cfg, 1), std::invalid_argument);
    const auto geo = Scenario::make(3, 3, 0.5, 0.5, builtin_family("geometric"));
    CHECK_THROWS_AS(run_scenario(geo, 1, cfg, 1), std::invalid_argument);
}

TEST_CASE("empty samples are flagged") {
    const auto s = Scenario::make(2, 2, 1e-9, 1e-9, builtin_family("poisson"));
    const auto recs = run_scenario(s, 4, quick_config(), 3);
    for (const auto& r : recs) {
        CHECK(r.t == 0);
        CHECK(r.degenerate);
        CHECK(r.bias_fiber == 0.0);
        CHECK(r.bias_orbit == 0.0);
        CHECK(r.bias_perm == 0.0);
    }
}

TEST_CASE("permutation count follows the rule unless fixed") {
    StudyConfig cfg;
    const SampleVector y({3, 2, 1}, 2);
    CHECK(cfg.perm_replications_for(y) == 21429);
    cfg.perm_replications = 10000;
    CHECK(cfg.perm_replications_for(y) == 10000);
}

TEST_CASE("summaries") {
    const auto s = table3_scenarios()[0];
    const auto constant = summarize({record_with(s, 0.25), record_with(s, 0.25), record_with(s, 0.25)});
    REQUIRE(constant.size() == 3);
    for (const auto& row : constant) {
        CHECK(row.range == 0.0);
        CHECK(row.sd == 0.0);
        CHECK(row.mad == 0.0);
        CHECK(row.mad0 == doctest::Approx(0.25));
        CHECK(row.count == 3);
    }
    const auto pm = summarize({record_with(s, -1.0), record_with(s, 1.0)});
    for (const auto& row : pm) {
        CHECK(row.mean == 0.0);
        CHECK(row.range == 2.0);
        CHECK(row.sd == doctest::Approx(std::sqrt(2.0)));
        CHECK(row.mad == 1.0);
        CHECK(row.mad0 == 1.0);
    }
    CHECK(pm[0].method == Method::fiber);
    CHECK(pm[1].method == Method::orbit);
    CHECK(pm[2].method == Method::perm);

    const auto other = table3_scenarios()[4];
    const auto two = summarize({record_with(s, 0.1), record_with(other, 0.2), record_with(s, 0.3)});
    REQUIRE(two.size() == 6);
    CHECK(two[0].scenario.n1 == 6);
    CHECK(two[0].count == 2);
    CHECK(two[0].mean == doctest::Approx(0.2));
    CHECK(two[3].scenario.n1 == 10);
    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("json and csv output") {
    const auto s = table3_scenarios()[0];
    const auto j = to_json(summarize({record_with(s, 0.1), record_with(s, -0.1)}));
    REQUIRE(j.size() == 3);
    for (const char* key : {"scenario", "method", "mean", "range", "sd", "mad", "mad0"}) CHECK(j[0].contains(key));
    CHECK(j[1]["method"] == "orbit");
    CHECK(j[0]["scenario"]["n1"] == 6);

    std::ostringstream csv;
    write_bias_csv(csv, run_scenario(s, 2, quick_config(), 4));
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header.rfind("n1,n2,mu1,mu2,replicate,seed,t,u_obs,exact,bias_fiber", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("convergence trace") {
    const SampleVector y({1, 0, 2, 1, 0, 1, 0, 0, 2, 1}, 6);
    const auto tr = convergence_trace(y, builtin_family("poisson"), 300, 8);
    REQUIRE(tr.rows.size() == 300);
    CHECK(tr.rows.front().step == 1);
    CHECK(tr.rows.back().step == 300);
    CHECK(tr.u_obs == 5);
    CHECK(tr.exact == doctest::Approx(to_double(binomial_closed_form_at(5, 8, 6, 4))));
    CHECK(tr.permutation >= 0.0);
    CHECK(tr.permutation <= 1.0);
    std::ostringstream out;
    write_trace_csv(out, tr);
    CHECK(out.str().rfind("step,fiber_estimate,orbit_estimate,exact,permutation\n", 0) == 0);
}

TEST_CASE("timing report") {
    const auto empty = timing_report({}, quick_config(), 1, 1);
    CHECK(empty.rows.empty());
    CHECK_FALSE(empty.machine.empty());
    const auto one = timing_report({table3_scenarios()[0]}, quick_config(), 2, 1);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].fiber_seconds > 0.0);
    CHECK(one.rows[0].orbit_seconds > 0.0);
    CHECK(one.rows[0].perm_draws >= 1.0);
    const auto j = to_json(one);
    CHECK(j.contains("machine"));
    CHECK(j["rows"].size() == 1);
}
