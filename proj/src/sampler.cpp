#include "orbitmc/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "orbitmc/random.hpp"

namespace orbitmc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream layout under one master seed: 0 drives the chain, 1 the observed-orbit
// Monte Carlo, 1 + p the Monte Carlo of post-burn-in step p.
constexpr std::uint64_t kChainStream = 0;
constexpr std::uint64_t kObservedOrbitStream = 1;

void require_in_support(const SampleVector& y, const FamilySpec& family) {
    for (int v : y.entries())
        if (!family.in_support(v))
            throw std::invalid_argument("observed value " + std::to_string(v) + " is outside the support of " +
                                        family.describe());
}

CdfEstimate make_estimate(CdfMethod method, const SampleVector& y, const ChainConfig& cfg) {
    CdfEstimate e;
    e.method = method;
    e.t = static_cast<int>(y.total());
    e.u_obs = static_cast<int>(y.u());
    e.steps = cfg.steps;
    e.seed = cfg.seed;
    return e;
}

// Empirical cdf from per-U masses that sum to `total`.
std::vector<double> cdf_from_mass(const std::vector<double>& mass, double total) {
    std::vector<double> out(mass.size());
    double running = 0.0;
    for (std::size_t u = 0; u < mass.size(); ++u) {
        running += mass[u];
        out[u] = running / total;
    }
    if (!out.empty()) out.back() = 1.0;
    return out;
}

// Shared bookkeeping for both fiber walks.
class FiberChainRecorder {
public:
    FiberChainRecorder(const SampleVector& y, const ChainConfig& cfg, const StateObserver& observer)
        : cfg_(cfg), observer_(observer), u_obs_(y.u()), mass_(static_cast<std::size_t>(y.total()) + 1, 0.0) {
        trace_.records.reserve(static_cast<std::size_t>(cfg.steps));
    }

    void record(long step, std::span<const int> state, long u) {
        if (step < cfg_.burn_in) return;
        const long post = step - cfg_.burn_in + 1;
        if (u <= u_obs_) ++below_;
        mass_[static_cast<std::size_t>(u)] += 1.0;
        trace_.records.push_back({post, u, static_cast<double>(below_) / static_cast<double>(post)});
        if (observer_) observer_(state);
    }

    ChainTrace& trace() { return trace_; }

    void finish(CdfEstimate& e) const {
        e.at_u_obs = static_cast<double>(below_) / static_cast<double>(cfg_.steps);
        if (cfg_.estimate_full_cdf) e.values = cdf_from_mass(mass_, static_cast<double>(cfg_.steps));
    }

private:
    const ChainConfig& cfg_;
    const StateObserver& observer_;
    long u_obs_;
    long below_ = 0;
    std::vector<double> mass_;
    ChainTrace trace_;
};

// Change of U when mass eps moves from entry k to entry 0 (y_0 += eps, y_k -= eps).
long u_shift(int k, int eps, int n1) { return (n1 > 0 ? eps : 0) - (k < n1 ? eps : 0); }

template <class Step>
ChainResult run_fiber_walk(CdfMethod method, const SampleVector& y_obs, const FamilySpec& family,
                           const ChainConfig& cfg, const StateObserver& observer, Step&& step) {
    cfg.validate();
    require_in_support(y_obs, family);
    ChainResult res{make_estimate(method, y_obs, cfg), {}, std::nullopt};
    const int n = y_obs.size();
    if (n == 1) {
        res.estimate.degenerate = true;
        res.estimate.warnings.emplace_back("N = 1: the fiber basis is empty and the chain cannot move");
    }
    const long t = y_obs.total();
    const std::vector<double> log_h = family.log_base_measure_table(t);
    std::vector<int> y(y_obs.entries().begin(), y_obs.entries().end());
    long u = y_obs.u();
    Rng rng = Rng::derive(cfg.seed, kChainStream);
    FiberChainRecorder rec(y_obs, cfg, observer);

    const long total_steps = cfg.burn_in + cfg.steps;
    for (long s = 0; s < total_steps; ++s) {
        if (n > 1) {
            const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
            ++rec.trace().proposals;
            const int moved = step(y, k, log_h, rng, rec.trace());  // signed change of y_0
            u += u_shift(k, moved, y_obs.n1());
        }
        assert(std::accumulate(y.begin(), y.end(), 0L) == t);
        rec.record(s, y, u);
    }
    rec.finish(res.estimate);
    res.trace = std::move(rec.trace());
    return res;
}

}  // namespace

void ChainConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("chain needs steps >= 1");
    if (burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
    if (mc_total_budget < 1) throw std::invalid_argument("Monte Carlo budget must be >= 1");
    if (replications_override && *replications_override < 1)
        throw std::invalid_argument("replications override must be >= 1");
}

ChainResult mcmc_fiber_standard(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                                const StateObserver& observer) {
    return run_fiber_walk(
        CdfMethod::mcmc_fiber, y_obs, family, cfg, observer,
        [](std::vector<int>& y, int k, const std::vector<double>& log_h, Rng& rng, ChainTrace& trace) {
            const int eps = rng.sign();
            const int a = y[0] + eps;
            const int b = y[k] - eps;
            if (a < 0 || b < 0) {
                ++trace.inadmissible;
                return 0;
            }
            const double log_ratio = log_h[a] + log_h[b] - log_h[y[0]] - log_h[y[k]];
            if (log_ratio == kNegInf) return 0;
            if (log_ratio < 0.0 && !(std::log(rng.uniform01()) < log_ratio)) return 0;
            y[0] = a;
            y[k] = b;
            ++trace.accepted;
            return eps;
        });
}

namespace {

// Fills weights with exp(log q_lambda - max) for lambda = -y_0 .. y_k; returns their sum.
double accelerated_weights(std::span<const int> y, int k, const std::vector<double>& log_h,
                           std::vector<double>& weights) {
    const int lo = -y[0];
    const int hi = y[k];
    weights.resize(static_cast<std::size_t>(hi - lo + 1));
    double max_w = kNegInf;
    for (int lam = lo; lam <= hi; ++lam) {
        const double w = log_h[y[0] + lam] + log_h[y[k] - lam];
        weights[lam - lo] = w;
        max_w = std::max(max_w, w);
    }
    double total = 0.0;
    for (double& w : weights) {
        w = (w == kNegInf) ? 0.0 : std::exp(w - max_w);
        total += w;
    }
    return total;
}

}  // namespace

ChainResult mcmc_fiber_accelerated(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                                   const StateObserver& observer) {
    std::vector<double> weights;
    return run_fiber_walk(
        CdfMethod::mcmc_fiber, y_obs, family, cfg, observer,
        [&weights](std::vector<int>& y, int k, const std::vector<double>& log_h, Rng& rng, ChainTrace& trace) {
            const double total = accelerated_weights(y, k, log_h, weights);
            // Cumulative inversion; the smallest lambda wins ties.
            const double target = rng.uniform01() * total;
            double running = 0.0;
            std::size_t pick = weights.size();
            for (std::size_t i = 0; i < weights.size(); ++i) {
                running += weights[i];
                if (weights[i] > 0.0) pick = i;  // fallback against rounding at the top end
                if (running > target && weights[i] > 0.0) break;
            }
            const int lambda = static_cast<int>(pick) - y[0];
            if (lambda != 0) ++trace.accepted;
            y[0] += lambda;
            y[k] -= lambda;
            return lambda;
        });
}

std::vector<double> accelerated_move_law(std::span<const int> y, int k, const FamilySpec& family) {
    if (k < 1 || k >= static_cast<int>(y.size())) throw std::invalid_argument("move index outside [1, N-1]");
    const long t = std::accumulate(y.begin(), y.end(), 0L);
    const auto log_h = family.log_base_measure_table(t);
    std::vector<double> w;
    const double total = accelerated_weights(y, k, log_h, w);
    for (double& x : w) x /= total;
    return w;
}

long mc_replications_rule(const FrequencyVector& f, long budget) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    const BigInt fiber = fiber_cardinality(f.n(), f.t());
    const BigInt num = BigInt(budget) * orbit_cardinality(f);
    BigInt r = (num + fiber - 1) / fiber;
    if (r < 1) r = 1;
    return r.get_si();
}

namespace {

// The orbit-basis move m_{k,i} stored by its support.
struct OrbitMove {
    int k;
    int i;
};

std::vector<OrbitMove> orbit_moves(int t) {
    std::vector<OrbitMove> out;
    for (int k = 2; k <= t; ++k)
        for (int i = 1; i <= k / 2; ++i) out.push_back({k, i});
    return out;
}

double orbit_log_ratio(std::span<const int> from, std::span<const int> to, const std::vector<double>& log_fact,
                       const std::vector<double>& log_h) {
    double r = 0.0;
    for (std::size_t j = 0; j < from.size(); ++j) {
        const int d = to[j] - from[j];
        if (d == 0) continue;
        if (log_h[j] == kNegInf) {
            if (d > 0) return kNegInf;
            continue;
        }
        r += log_fact[from[j]] - log_fact[to[j]] + d * log_h[j];
    }
    return r;
}

// Monte Carlo over one orbit: r uniform arrangements, tallying U. Only the
// first min(n1, n2) positions are shuffled; their multiset has the law of a
// full uniform permutation's prefix.
class OrbitMonteCarlo {
public:
    OrbitMonteCarlo(int n1, long t) : n1_(n1), t_(t), hist_(static_cast<std::size_t>(t) + 1, 0) {}

    /// Returns the number of draws with U <= u_obs; hist() holds all U counts.
    long run(const FrequencyVector& f, long r, long u_obs, Rng& rng) {
        arr_ = f.representative();
        const int n = static_cast<int>(arr_.size());
        const int m = std::min(n1_, n - n1_);
        const bool direct = (m == n1_);
        std::fill(hist_.begin(), hist_.end(), 0);
        long below = 0;
        for (long d = 0; d < r; ++d) {
            long s = 0;
            for (int i = 0; i < m; ++i) {
                const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
                std::swap(arr_[static_cast<std::size_t>(i)], arr_[j]);
                s += arr_[static_cast<std::size_t>(i)];
            }
            const long u = direct ? s : t_ - s;
            below += (u <= u_obs);
            ++hist_[static_cast<std::size_t>(u)];
        }
        return below;
    }

    const std::vector<long>& hist() const { return hist_; }

private:
    int n1_;
    long t_;
    std::vector<int> arr_;
    std::vector<long> hist_;
};

}  // namespace

double orbit_acceptance_probability(const FrequencyVector& from, const FrequencyVector& to,
                                    const FamilySpec& family) {
    if (from.n() != to.n() || from.t() != to.t())
        throw std::invalid_argument("orbits belong to different fibers");
    const auto log_fact = log_factorial_table(from.n());
    const auto log_h = family.log_base_measure_table(from.t());
    const double r = orbit_log_ratio(from.freqs(), to.freqs(), log_fact, log_h);
    return r >= 0.0 ? 1.0 : std::exp(r);
}

ChainResult mcmc_orbit(const SampleVector& y_obs, const FamilySpec& family, const ChainConfig& cfg,
                       const StateObserver& observer) {
    cfg.validate();
    require_in_support(y_obs, family);
    ChainResult res{make_estimate(CdfMethod::mcmc_orbit, y_obs, cfg), {}, std::nullopt};
    const int n = y_obs.size();
    const int n1 = y_obs.n1();
    const long t = y_obs.total();
    const long u_obs = y_obs.u();
    const FrequencyVector f_obs = to_frequency(y_obs.entries());

    std::map<FrequencyVector, long> replications_cache;
    const auto replications = [&](const FrequencyVector& f) {
        if (cfg.replications_override) return *cfg.replications_override;
        auto it = replications_cache.find(f);
        if (it == replications_cache.end())
            it = replications_cache.emplace(f, mc_replications_rule(f, cfg.mc_total_budget)).first;
        return it->second;
    };

    OrbitMonteCarlo mc(n1, t);
    {
        Rng rng = Rng::derive(cfg.seed, kObservedOrbitStream);
        const long r = replications(f_obs);
        res.observed_orbit_estimate = static_cast<double>(mc.run(f_obs, r, u_obs, rng)) / static_cast<double>(r);
    }

    if (t == 0) {
        // One orbit, one point: U = 0 surely.
        res.estimate.degenerate = true;
        res.estimate.values = {1.0};
        res.estimate.at_u_obs = 1.0;
        for (long p = 1; p <= cfg.steps; ++p) res.trace.records.push_back({p, 0, 1.0});
        if (observer)
            for (long p = 1; p <= cfg.steps; ++p) observer(f_obs.freqs());
        return res;
    }

    const auto moves = orbit_moves(static_cast<int>(t));
    const auto log_fact = log_factorial_table(n);
    const auto log_h = family.log_base_measure_table(t);
    std::vector<int> f(f_obs.freqs().begin(), f_obs.freqs().end());
    std::vector<int> proposal(f.size());
    FrequencyVector current = f_obs;
    std::map<FrequencyVector, long> orbit_ids{{f_obs, 0}};
    long orbit_id = 0;

    Rng rng = Rng::derive(cfg.seed, kChainStream);
    std::vector<double> mass(static_cast<std::size_t>(t) + 1, 0.0);
    double estimate_sum = 0.0;

    res.trace.records.reserve(static_cast<std::size_t>(cfg.steps));
    const long total_steps = cfg.burn_in + cfg.steps;
    for (long s = 0; s < total_steps; ++s) {
        if (!moves.empty()) {  // t = 1: a single orbit, the chain holds
            const OrbitMove mv = moves[rng.below(moves.size())];
            const int eps = rng.sign();
            ++res.trace.proposals;
            proposal = f;
            proposal[0] -= eps;
            proposal[mv.k] -= eps;
            proposal[mv.i] += eps;
            proposal[mv.k - mv.i] += eps;
            const bool admissible =
                proposal[0] >= 0 && proposal[mv.k] >= 0 && proposal[mv.i] >= 0 && proposal[mv.k - mv.i] >= 0;
            if (!admissible) {
                ++res.trace.inadmissible;
            } else {
                const double lr = orbit_log_ratio(f, proposal, log_fact, log_h);
                const bool accept = lr >= 0.0 || (lr != kNegInf && std::log(rng.uniform01()) < lr);
                if (accept) {
                    f.swap(proposal);
                    current = FrequencyVector(f);
                    auto [it, fresh] = orbit_ids.emplace(current, static_cast<long>(orbit_ids.size()));
                    orbit_id = it->second;
                    ++res.trace.accepted;
                }
            }
        }

        if (s < cfg.burn_in) continue;
        const long post = s - cfg.burn_in + 1;
        Rng mc_rng = Rng::derive(cfg.seed, kObservedOrbitStream + static_cast<std::uint64_t>(post));
        const long r = replications(current);
        res.estimate.replications += r;
        const long below = mc.run(current, r, u_obs, mc_rng);
        estimate_sum += static_cast<double>(below) / static_cast<double>(r);
        if (cfg.estimate_full_cdf) {
            const auto& hist = mc.hist();
            for (std::size_t u = 0; u < hist.size(); ++u)
                mass[u] += static_cast<double>(hist[u]) / static_cast<double>(r);
        }
        res.trace.records.push_back({post, orbit_id, estimate_sum / static_cast<double>(post)});
        if (observer) observer(f);
    }

    res.estimate.at_u_obs = estimate_sum / static_cast<double>(cfg.steps);
    if (cfg.estimate_full_cdf) res.estimate.values = cdf_from_mass(mass, static_cast<double>(cfg.steps));
    return res;
}

CdfEstimate permutation_test(const SampleVector& y_obs, long replications, std::uint64_t seed) {
    if (replications < 1) throw std::invalid_argument("permutation test needs replications >= 1");
    const long t = y_obs.total();
    const long u_obs = y_obs.u();
    Rng rng = Rng::derive(seed, kChainStream);
    OrbitMonteCarlo mc(y_obs.n1(), t);
    const long below = mc.run(to_frequency(y_obs.entries()), replications, u_obs, rng);

    CdfEstimate e;
    e.method = CdfMethod::permutation;
    e.t = static_cast<int>(t);
    e.u_obs = static_cast<int>(u_obs);
    e.replications = replications;
    e.seed = seed;
    e.at_u_obs = static_cast<double>(below) / static_cast<double>(replications);
    std::vector<double> mass(mc.hist().begin(), mc.hist().end());
    e.values = cdf_from_mass(mass, static_cast<double>(replications));
    return e;
}

}  // namespace orbitmc
