#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "orbitmc/exact.hpp"
#include "orbitmc/family.hpp"
#include "orbitmc/fiber.hpp"
#include "orbitmc/orbit.hpp"

namespace orbitmc {

struct ChainConfig {
    long steps = 4000;  // post-burn-in
    long burn_in = 1000;
    std::uint64_t seed = 1;
    bool estimate_full_cdf = false;
    long mc_total_budget = 100000;  // orbit chain: r(pi) = ceil(budget * #pi / #F)
    std::optional<long> replications_override;

    static ChainConfig fiber_defaults() { return {}; }
    static ChainConfig orbit_defaults() {
        ChainConfig c;
        c.steps = 850;
        c.burn_in = 250;
        return c;
    }

    /// Throws std::invalid_argument on steps < 1, burn_in < 0 or budget < 1.
    void validate() const;
};

struct TraceRecord {
    long step;       // 1-based, post-burn-in
    long state;      // U of the fiber state, or the orbit id (order of first visit, 0 = observed)
    double estimate;  // running estimate of F(u_obs)
};

struct ChainTrace {
    std::vector<TraceRecord> records;
    long proposals = 0;
    long inadmissible = 0;
    long accepted = 0;
};

/// Called once per post-burn-in step with the current chain state
/// (a fiber point, or a frequency vector for the orbit chain).
using StateObserver = std::function<void(std::span<const int>)>;

struct ChainResult {
    CdfEstimate estimate;
    ChainTrace trace;
    /// Orbit chain only: the Monte Carlo estimate of F(u_obs | orbit of y_obs).
    std::optional<double> observed_orbit_estimate;
};

/// Unit-step Metropolis-Hastings walk on F_{N,t} with the moves of B_N.
ChainResult mcmc_fiber_standard(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                                const StateObserver& observer = {});

/// Walk on F_{N,t} that samples the full conditional along the chosen move.
ChainResult mcmc_fiber_accelerated(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                                   const StateObserver& observer = {});

/// Probabilities of lambda = -y_1, ..., y_{K+1} for one accelerated step along
/// move K (1-based); normalized in log space.
std::vector<double> accelerated_move_law(std::span<const int> y, int k, const FamilySpec& family);

/// ceil(budget * #pi / C(t+N-1, N-1)), at least 1.
long mc_replications_rule(const FrequencyVector& f, long budget);

/// Metropolis-Hastings acceptance probability for the orbit chain step from -> to.
double orbit_acceptance_probability(const FrequencyVector& from, const FrequencyVector& to,
                                    const FamilySpec& family);

/// Two-step sampler: Metropolis-Hastings over the orbits of F_{N,t} with the
/// moves of B_t, plus Monte Carlo permutations inside every visited orbit.
ChainResult mcmc_orbit(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                       const StateObserver& observer = {});

/// Monte Carlo permutation estimate of F_U(. | orbit of y_obs).
CdfEstimate permutation_test(const SampleVector& y_obs, long replications, std::uint64_t seed);

}  // namespace orbitmc
