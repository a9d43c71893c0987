#include "orbitmc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <sys/utsname.h>

#include "orbitmc/exact.hpp"
#include "orbitmc/random.hpp"

namespace orbitmc {

const char* to_string(Method m) {
    switch (m) {
        case Method::fiber: return "fiber";
        case Method::orbit: return "orbit";
        case Method::perm: return "perm";
    }
    return "unknown";
}

std::vector<Scenario> table3_scenarios() {
    const FamilySpec poisson = builtin_family("poisson");
    std::vector<Scenario> out;
    for (auto [n1, n2] : {std::pair{6, 4}, std::pair{10, 15}, std::pair{30, 20}})
        for (double mu2 : {1.0, 1.5, 2.0}) out.push_back(Scenario::make(n1, n2, 1.0, mu2, poisson));
    return out;
}

double BiasRecord::bias(Method m) const {
    switch (m) {
        case Method::fiber: return bias_fiber;
        case Method::orbit: return bias_orbit;
        case Method::perm: return bias_perm;
    }
    return 0.0;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, long replicate) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(replicate));
}

SampleVector draw_replicate(const Scenario& s, std::uint64_t seed) {
    Rng rng = Rng::derive(seed, 0);
    std::vector<int> y = sample_iid(s.family, s.mu1, s.n1, rng);
    const std::vector<int> y2 = sample_iid(s.family, s.mu2, s.n2, rng);
    y.insert(y.end(), y2.begin(), y2.end());
    return SampleVector(std::move(y), s.n1);
}

long StudyConfig::perm_replications_for(const SampleVector& y) const {
    if (perm_replications) return *perm_replications;
    return mc_replications_rule(to_frequency(y.entries()), perm_budget);
}

namespace {

struct ReplicateEstimates {
    double fiber;
    double orbit;
    double perm;
};

ReplicateEstimates estimate_all(const SampleVector& y, const FamilySpec& family, const StudyConfig& cfg,
                                std::uint64_t seed) {
    ChainConfig fiber = cfg.fiber;
    fiber.seed = mix_seed(seed, 1);
    ChainConfig orbit = cfg.orbit;
    orbit.seed = mix_seed(seed, 2);
    return {*mcmc_fiber_accelerated(y, family, fiber).estimate.at_u_obs,
            *mcmc_orbit(y, family, orbit).estimate.at_u_obs,
            *permutation_test(y, cfg.perm_replications_for(y), mix_seed(seed, 3)).at_u_obs};
}

}  // namespace

std::vector<BiasRecord> run_scenario(const Scenario& s, long replicates, const StudyConfig& cfg,
                                     std::uint64_t master_seed) {
    if (s.family.kind() != FamilyKind::poisson)
        throw std::invalid_argument("the error study needs a Poisson scenario (closed-form reference)");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    std::vector<BiasRecord> out;
    out.reserve(static_cast<std::size_t>(replicates));
    for (long rep = 0; rep < replicates; ++rep) {
        BiasRecord r{s};
        r.replicate = rep;
        r.seed = replicate_seed(master_seed, rep);
        const SampleVector y = draw_replicate(s, r.seed);
        r.t = y.total();
        r.u_obs = y.u();
        if (r.t == 0) {
            r.exact_reference = 1.0;
            r.degenerate = true;
            out.push_back(r);
            continue;
        }
        r.perm_replications = cfg.perm_replications_for(y);
        r.exact_reference =
            to_double(binomial_closed_form_at(static_cast<int>(r.u_obs), static_cast<int>(r.t), s.n1, s.n2));
        const auto est = estimate_all(y, s.family, cfg, r.seed);
        r.bias_fiber = r.exact_reference - est.fiber;
        r.bias_orbit = r.exact_reference - est.orbit;
        r.bias_perm = r.exact_reference - est.perm;
        out.push_back(r);
    }
    return out;
}

namespace {

bool same_scenario(const Scenario& a, const Scenario& b) {
    return a.n1 == b.n1 && a.n2 == b.n2 && a.mu1 == b.mu1 && a.mu2 == b.mu2 &&
           a.family.describe() == b.family.describe();
}

}  // namespace

SummaryTable summarize(const std::vector<BiasRecord>& records) {
    if (records.empty()) throw std::invalid_argument("nothing to summarize");
    std::vector<std::vector<const BiasRecord*>> groups;
    for (const auto& r : records) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return same_scenario(g.front()->scenario, r.scenario); });
        if (it == groups.end()) {
            groups.push_back({&r});
        } else {
            it->push_back(&r);
        }
    }

    SummaryTable table;
    for (const auto& g : groups) {
        for (Method m : kMethods) {
            SummaryRow row{g.front()->scenario, m};
            const auto n = static_cast<double>(g.size());
            row.count = static_cast<long>(g.size());
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto* r : g) {
                const double b = r->bias(m);
                row.mean += b;
                lo = std::min(lo, b);
                hi = std::max(hi, b);
                row.mad0 += std::abs(b);
            }
            row.mean /= n;
            row.mad0 /= n;
            row.range = hi - lo;
            double ss = 0.0;
            for (const auto* r : g) {
                const double d = r->bias(m) - row.mean;
                ss += d * d;
                row.mad += std::abs(d);
            }
            row.mad /= n;
            row.sd = g.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            table.push_back(row);
        }
    }
    return table;
}

ConvergenceTrace convergence_trace(const SampleVector& y_obs, const FamilySpec& family, long steps,
                                   std::uint64_t seed) {
    ChainConfig cfg;
    cfg.steps = steps;
    cfg.burn_in = 0;
    cfg.seed = mix_seed(seed, 1);
    const auto fiber = mcmc_fiber_accelerated(y_obs, family, cfg);
    cfg.seed = mix_seed(seed, 2);
    const auto orbit = mcmc_orbit(y_obs, family, cfg);

    ConvergenceTrace out;
    out.u_obs = y_obs.u();
    const int t = static_cast<int>(y_obs.total());
    if (family.kind() == FamilyKind::poisson) {
        out.exact = to_double(binomial_closed_form_at(static_cast<int>(out.u_obs), t, y_obs.n1(), y_obs.n2()));
    } else {
        try {
            out.exact = exact_conditional_cdf(y_obs.n1(), y_obs.n2(), t, family)(out.u_obs);
        } catch (const std::exception&) {
            out.exact = std::numeric_limits<double>::quiet_NaN();
        }
    }
    out.permutation = *permutation_test(y_obs, 10000, mix_seed(seed, 3)).at_u_obs;
    out.rows.reserve(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i)
        out.rows.push_back({i + 1, fiber.trace.records[i].estimate, orbit.trace.records[i].estimate});
    return out;
}

std::string machine_descriptor() {
    std::string cpu;
    std::ifstream info("/proc/cpuinfo");
    for (std::string line; std::getline(info, line);) {
        if (line.rfind("model name", 0) == 0) {
            cpu = line.substr(line.find(':') + 2);
            break;
        }
    }
    utsname u{};
    std::string os = uname(&u) == 0 ? std::string(u.sysname) + " " + u.release + " " + u.machine : "unknown";
    return (cpu.empty() ? std::string("unknown cpu") : cpu) + "; " + std::to_string(std::thread::hardware_concurrency()) +
           " threads; " + os;
}

TimingReport timing_report(const std::vector<Scenario>& scenarios, const StudyConfig& cfg, long samples,
                           std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("timing needs samples >= 1");
    using clock = std::chrono::steady_clock;
    const auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };
    TimingReport report{machine_descriptor(), {}};
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
        const Scenario& s = scenarios[si];
        TimingRow row{s, samples};
        for (long rep = 0; rep < samples; ++rep) {
            const std::uint64_t rs = replicate_seed(mix_seed(seed, si), rep);
            const SampleVector y = draw_replicate(s, rs);
            ChainConfig c = cfg.fiber;
            c.seed = mix_seed(rs, 1);
            auto t0 = clock::now();
            (void)mcmc_fiber_accelerated(y, s.family, c);
            row.fiber_seconds += seconds(clock::now() - t0);
            c = cfg.orbit;
            c.seed = mix_seed(rs, 2);
            t0 = clock::now();
            (void)mcmc_orbit(y, s.family, c);
            row.orbit_seconds += seconds(clock::now() - t0);
            const long draws = cfg.perm_replications_for(y);
            t0 = clock::now();
            (void)permutation_test(y, draws, mix_seed(rs, 3));
            row.perm_seconds += seconds(clock::now() - t0);
            row.perm_draws += static_cast<double>(draws);
        }
        row.fiber_seconds /= static_cast<double>(samples);
        row.orbit_seconds /= static_cast<double>(samples);
        row.perm_seconds /= static_cast<double>(samples);
        row.perm_draws /= static_cast<double>(samples);
        report.rows.push_back(row);
    }
    return report;
}

void write_bias_csv(std::ostream& out, const std::vector<BiasRecord>& records) {
    out << "n1,n2,mu1,mu2,replicate,seed,t,u_obs,exact,bias_fiber,bias_orbit,bias_perm,perm_replications,degenerate\n";
    out.precision(10);
    for (const auto& r : records) {
        out << r.scenario.n1 << ',' << r.scenario.n2 << ',' << r.scenario.mu1 << ',' << r.scenario.mu2 << ','
            << r.replicate << ',' << r.seed << ',' << r.t << ',' << r.u_obs << ',' << r.exact_reference << ','
            << r.bias_fiber << ',' << r.bias_orbit << ',' << r.bias_perm << ',' << r.perm_replications << ','
            << (r.degenerate ? 1 : 0) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
    out << "step,fiber_estimate,orbit_estimate,exact,permutation\n";
    out.precision(10);
    for (const auto& row : trace.rows)
        out << row.step << ',' << row.fiber_estimate << ',' << row.orbit_estimate << ',' << trace.exact << ','
            << trace.permutation << '\n';
}

namespace {

nlohmann::json scenario_json(const Scenario& s) {
    return {{"n1", s.n1}, {"n2", s.n2}, {"mu1", s.mu1}, {"mu2", s.mu2}, {"family", s.family.describe()}};
}

}  // namespace

nlohmann::json to_json(const SummaryTable& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table) {
        out.push_back({{"scenario", scenario_json(row.scenario)},
                       {"method", to_string(row.method)},
                       {"count", row.count},
                       {"mean", row.mean},
                       {"range", row.range},
                       {"sd", row.sd},
                       {"mad", row.mad},
                       {"mad0", row.mad0}});
    }
    return out;
}

nlohmann::json to_json(const TimingReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"scenario", scenario_json(r.scenario)},
                        {"samples", r.samples},
                        {"fiber_seconds", r.fiber_seconds},
                        {"orbit_seconds", r.orbit_seconds},
                        {"perm_seconds", r.perm_seconds},
                        {"perm_draws", r.perm_draws}});
    }
    return {{"machine", report.machine}, {"rows", rows}};
}

}  // namespace orbitmc
