#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "orbitmc/family.hpp"
#include "orbitmc/fiber.hpp"
#include "orbitmc/sampler.hpp"

namespace orbitmc {

enum class Method { fiber, orbit, perm };
inline constexpr std::array<Method, 3> kMethods{Method::fiber, Method::orbit, Method::perm};
const char* to_string(Method m);

/// The nine Poisson scenarios of the error study.
std::vector<Scenario> table3_scenarios();

struct BiasRecord {
    Scenario scenario;
    long replicate = 0;
    double exact_reference = 0.0;
    double bias_fiber = 0.0;  // exact - estimate
    double bias_orbit = 0.0;
    double bias_perm = 0.0;
    long perm_replications = 0;
    long u_obs = 0;
    long t = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // t = 0

    double bias(Method m) const;
};

struct StudyConfig {
    ChainConfig fiber = ChainConfig::fiber_defaults();
    ChainConfig orbit = ChainConfig::orbit_defaults();
    /// Fixed permutation count. When unset, the permutation test takes r(pi_obs)
    /// draws from the orbit chain's replication rule, with perm_budget as the budget.
    std::optional<long> perm_replications;
    long perm_budget = 100000;

    long perm_replications_for(const SampleVector& y) const;
};

/// Per-replicate seed, a pure function of (master seed, replicate index).
std::uint64_t replicate_seed(std::uint64_t master_seed, long replicate);

/// Draws the replicate's data at the scenario means.
SampleVector draw_replicate(const Scenario& s, std::uint64_t seed);

/// Runs the accelerated fiber chain, the orbit chain and the permutation test on
/// each replicate and records their errors against the binomial closed form.
/// Requires a Poisson scenario.
std::vector<BiasRecord> run_scenario(const Scenario& s, long replicates, const StudyConfig& cfg,
                                     std::uint64_t master_seed);

struct SummaryRow {
    Scenario scenario;
    Method method;
    long count = 0;
    double mean = 0.0;
    double range = 0.0;
    double sd = 0.0;    // sample standard deviation (n - 1)
    double mad = 0.0;   // mean |bias - mean|
    double mad0 = 0.0;  // mean |bias|
};

using SummaryTable = std::vector<SummaryRow>;

/// One row per (scenario, method), scenarios in order of first appearance.
SummaryTable summarize(const std::vector<BiasRecord>& records);

struct ConvergenceRow {
    long step;
    double fiber_estimate;
    double orbit_estimate;
};

struct ConvergenceTrace {
    std::vector<ConvergenceRow> rows;
    long u_obs = 0;
    double exact = 0.0;
    double permutation = 0.0;  // 10,000 permutations of y_obs
};

/// Running estimates of F(u_obs) for both chains (no burn-in) over the given step count.
ConvergenceTrace convergence_trace(const SampleVector& y_obs, const FamilySpec& family, long steps,
                                   std::uint64_t seed);

struct TimingRow {
    Scenario scenario;
    long samples = 0;
    double fiber_seconds = 0.0;  // averages per sample
    double orbit_seconds = 0.0;
    double perm_seconds = 0.0;
    double perm_draws = 0.0;     // average permutations per sample
};

struct TimingReport {
    std::string machine;
    std::vector<TimingRow> rows;
};

/// Average wall-clock seconds per sample and method.
TimingReport timing_report(const std::vector<Scenario>& scenarios, const StudyConfig& cfg, long samples,
                           std::uint64_t seed);

std::string machine_descriptor();

void write_bias_csv(std::ostream& out, const std::vector<BiasRecord>& records);
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
nlohmann::json to_json(const SummaryTable& table);
nlohmann::json to_json(const TimingReport& report);

}  // namespace orbitmc
