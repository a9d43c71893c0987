// Command-line front end for the library.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "orbitmc/exact.hpp"
#include "orbitmc/fiber.hpp"
#include "orbitmc/harness.hpp"
#include "orbitmc/markov_basis.hpp"
#include "orbitmc/orbit.hpp"
#include "orbitmc/sampler.hpp"

using namespace orbitmc;
namespace fs = std::filesystem;

namespace {

std::string fixed(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string join(std::span<const int> v, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

/// A path to a file of counts (whitespace or comma separated), or the counts inline.
std::vector<int> read_counts(const std::string& spec) {
    std::string text = spec;
    if (fs::is_regular_file(spec)) {
        std::ifstream in(spec);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    for (char& c : text)
        if (c == ',' || c == ';' || c == '\n' || c == '\r' || c == '\t') c = ' ';
    std::istringstream in(text);
    std::vector<int> out;
    for (std::string tok; in >> tok;) {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("not an integer count: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("no counts in --data");
    return out;
}

void print_cdf_row(const CdfEstimate& e) {
    std::cout << "u";
    for (int u = 0; u <= e.t; ++u) std::cout << '\t' << u;
    std::cout << '\n';
    if (e.is_exact()) {
        std::cout << "F(exact)";
        for (const auto& q : e.exact_values) std::cout << '\t' << to_string(q);
        std::cout << '\n';
    }
    std::cout << "F";
    for (int u = 0; u <= e.t; ++u) std::cout << '\t' << fixed(e(u), 3);
    std::cout << '\n';
}

void print_p_values(const CdfEstimate& e, int u_obs) {
    if (e.is_exact()) {
        const auto p = exact_p_values(e, u_obs);
        std::cout << "p_left\t" << to_string(p.left) << '\t' << fixed(to_double(p.left)) << '\n'
                  << "p_right\t" << to_string(p.right) << '\t' << fixed(to_double(p.right)) << '\n'
                  << "p_two_sided\t" << to_string(p.two_sided) << '\t' << fixed(to_double(p.two_sided)) << '\n';
    } else {
        const auto p = p_values(e, u_obs);
        std::cout << "p_left\t" << fixed(p.left) << "\np_right\t" << fixed(p.right) << "\np_two_sided\t"
                  << fixed(p.two_sided) << '\n';
    }
}

void print_moves(const MarkovBasis& b) {
    for (Eigen::Index k = 0; k < b.size(); ++k) {
        for (Eigen::Index r = 0; r < b.moves.rows(); ++r) std::cout << (r ? " " : "") << b.moves(r, k);
        std::cout << '\n';
    }
}

struct ChainArgs {
    std::string data;
    int n1 = -1;
    int n2 = -1;
    std::string family = "poisson";
    long steps = 0;
    long burn_in = -1;
    std::uint64_t seed = 1;
    bool accelerated = false;
    bool full_cdf = false;
    long budget = 100000;
    std::optional<long> replications;
    std::string trace;
};

SampleVector sample_from(const ChainArgs& a) {
    auto counts = read_counts(a.data);
    if (a.n1 < 0) throw std::invalid_argument("--n1 is required");
    if (a.n2 >= 0 && a.n1 + a.n2 != static_cast<int>(counts.size()))
        throw std::invalid_argument("--n1 + --n2 must equal the number of counts (" + std::to_string(counts.size()) +
                                    ")");
    return SampleVector(std::move(counts), a.n1);
}

// chain = false for the permutation test: no family, no per-step trace
void add_chain_options(CLI::App* cmd, ChainArgs& a, bool chain) {
    cmd->add_option("--data", a.data, "file of counts (whitespace or comma separated), or inline counts like 1,0,3")->required();
    cmd->add_option("--n1", a.n1, "size of group 1 (the first n1 counts)")->required();
    cmd->add_option("--n2", a.n2, "size of group 2 (checked against the data)");
    if (chain) cmd->add_option("--family", a.family, "family, e.g. poisson or binomial:k=5");
    cmd->add_option("--seed", a.seed, "random seed");
    if (chain) cmd->add_option("--trace", a.trace, "write the per-step trace CSV here");
}

void write_chain_trace(const std::string& path, const ChainTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "step,U_or_orbit_id,estimate_so_far\n";
    out.precision(10);
    for (const auto& r : trace.records) out << r.step << ',' << r.state << ',' << r.estimate << '\n';
}

void report_estimate(const CdfEstimate& e) {
    std::cout << "method\t" << to_string(e.method) << "\nt\t" << e.t << "\nu_obs\t" << *e.u_obs << "\nF(u_obs)\t"
              << fixed(*e.at_u_obs) << '\n';
    if (e.steps) std::cout << "steps\t" << e.steps << '\n';
    if (e.replications) std::cout << "replications\t" << e.replications << '\n';
    for (const auto& w : e.warnings) std::cout << "warning\t" << w << '\n';
    if (e.has_full_cdf()) {
        print_cdf_row(e);
        print_p_values(e, *e.u_obs);
    }
}

void run_chain(const ChainArgs& a, bool orbit) {
    const SampleVector y = sample_from(a);
    const FamilySpec family = parse_family(a.family);
    ChainConfig cfg = orbit ? ChainConfig::orbit_defaults() : ChainConfig::fiber_defaults();
    if (a.steps > 0) cfg.steps = a.steps;
    if (a.burn_in >= 0) cfg.burn_in = a.burn_in;
    cfg.seed = a.seed;
    cfg.estimate_full_cdf = a.full_cdf;
    cfg.mc_total_budget = a.budget;
    cfg.replications_override = a.replications;
    const ChainResult r = orbit ? mcmc_orbit(y, family, cfg)
                          : a.accelerated ? mcmc_fiber_accelerated(y, family, cfg)
                                          : mcmc_fiber_standard(y, family, cfg);
    report_estimate(r.estimate);
    if (r.observed_orbit_estimate) std::cout << "F(u_obs | observed orbit)\t" << fixed(*r.observed_orbit_estimate) << '\n';
    std::cout << "proposals\t" << r.trace.proposals << "\naccepted\t" << r.trace.accepted << "\ninadmissible\t"
              << r.trace.inadmissible << '\n';
    if (!a.trace.empty()) write_chain_trace(a.trace, r.trace);
}

std::string scenario_tag(const Scenario& s) {
    std::ostringstream o;
    o << "n1_" << s.n1 << "_n2_" << s.n2 << "_mu1_" << s.mu1 << "_mu2_" << s.mu2;
    return o.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Markov-chain conditional tests for two-sample exponential-family counts"};
    app.require_subcommand(1);
    const auto positive = CLI::Range(1L, std::numeric_limits<long>::max(), "POSITIVE");
    const auto non_negative = CLI::Range(0L, std::numeric_limits<long>::max(), "NONNEGATIVE");

    // fiber-graph
    int fg_n = 0, fg_t = 0;
    bool fg_dot = false;
    auto* fg = app.add_subcommand("fiber-graph", "vertex/edge counts, connectivity and bipartiteness of the fiber graph");
    fg->add_option("--n", fg_n, "vector length N")->required()->check(positive);
    fg->add_option("--t", fg_t, "total t")->required()->check(non_negative);
    fg->add_flag("--emit-dot", fg_dot, "print the graph as a DOT listing");

    // basis
    std::string b_kind;
    std::optional<int> b_n, b_t;
    bool b_verify = false;
    auto* bc = app.add_subcommand("basis", "print a Markov basis, one move per row");
    bc->add_option("--kind", b_kind, "fiber or orbit")->required()->check(CLI::IsMember({"fiber", "orbit"}));
    bc->add_option("--n", b_n, "vector length (fiber basis; orbit connectivity check)");
    bc->add_option("--t", b_t, "total (orbit basis; fiber connectivity check)");
    bc->add_flag("--verify", b_verify, "check the kernel condition and, given both --n and --t, connectivity");

    // orbits
    int o_n = 0, o_t = 0;
    std::string o_family = "poisson";
    auto* oc = app.add_subcommand("orbits", "orbits of F(N,t) with cardinalities and exact probabilities");
    oc->add_option("--n", o_n, "vector length N")->required()->check(positive);
    oc->add_option("--t", o_t, "total t")->required()->check(non_negative);
    oc->add_option("--family", o_family, "family");

    // exact
    int e_n1 = 0, e_n2 = 0, e_t = 0;
    std::optional<int> e_u;
    std::string e_family = "poisson", e_method = "enum";
    auto* ec = app.add_subcommand("exact", "exact conditional cdf of U given T = t and p-values");
    ec->add_option("--n1", e_n1, "group-1 size")->required()->check(positive);
    ec->add_option("--n2", e_n2, "group-2 size")->required()->check(positive);
    ec->add_option("--t", e_t, "total t")->required()->check(non_negative);
    ec->add_option("--family", e_family, "family");
    ec->add_option("--u-obs", e_u, "observed U; prints p-values");
    ec->add_option("--method", e_method, "enum, convolution or closed (poisson only)")
        ->check(CLI::IsMember({"enum", "convolution", "closed"}));

    // samplers
    ChainArgs fa, oa, pa;
    auto* mf = app.add_subcommand("mcmc-fiber", "Metropolis-Hastings walk on the fiber");
    add_chain_options(mf, fa, true);
    mf->add_option("--steps", fa.steps, "post-burn-in steps (default 4000)");
    mf->add_option("--burnin", fa.burn_in, "burn-in steps (default 1000)");
    mf->add_flag("--accelerated", fa.accelerated, "sample the full conditional along each move");
    mf->add_flag("--full-cdf", fa.full_cdf, "estimate F at every u and print p-values");

    auto* mo = app.add_subcommand("mcmc-orbit", "Metropolis-Hastings walk on the orbits with Monte Carlo inside each");
    add_chain_options(mo, oa, true);
    mo->add_option("--steps", oa.steps, "post-burn-in steps (default 850)");
    mo->add_option("--burnin", oa.burn_in, "burn-in steps (default 250)");
    mo->add_option("--budget", oa.budget, "Monte Carlo budget B in r = ceil(B #pi / #F)");
    mo->add_option("--replications", oa.replications, "fixed Monte Carlo draws per orbit instead of the rule");
    mo->add_flag("--full-cdf", oa.full_cdf, "estimate F at every u and print p-values");

    long p_reps = 10000;
    auto* pt = app.add_subcommand("permtest", "Monte Carlo permutation test within the observed orbit");
    add_chain_options(pt, pa, false);
    pt->add_option("--replications,--steps", p_reps, "number of permutations")->check(positive);

    // simulate
    std::string s_set;
    std::optional<int> s_n1, s_n2;
    double s_mu1 = 1.0, s_mu2 = 1.0;
    long s_reps = 1000, s_trace_steps = 5000, s_timing = 3;
    std::uint64_t s_seed = 1;
    std::optional<long> s_perm;
    std::string s_out = "results";
    auto* sim = app.add_subcommand("simulate", "error study: bias records, summary, convergence traces and timing");
    sim->add_option("--scenarios", s_set, "named scenario set (table3)")->check(CLI::IsMember({"table3"}));
    sim->add_option("--n1", s_n1, "group-1 size of a single scenario");
    sim->add_option("--n2", s_n2, "group-2 size of a single scenario");
    sim->add_option("--mu1", s_mu1, "group-1 Poisson mean");
    sim->add_option("--mu2", s_mu2, "group-2 Poisson mean");
    sim->add_option("--replicates", s_reps, "replicates per scenario")->check(positive);
    sim->add_option("--seed", s_seed, "master seed");
    sim->add_option("--perm-replications", s_perm, "fixed permutation count (default: replication rule)");
    sim->add_option("--trace-steps", s_trace_steps, "steps of each convergence trace (0 = none)");
    sim->add_option("--timing-samples", s_timing, "samples per scenario for timing (0 = none)");
    sim->add_option("--out", s_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*fg) {
            const FiberGraph g = build_fiber_graph(fg_n, fg_t);
            std::cout << "vertices\t" << g.vertex_count() << "\nedges\t" << g.edge_count() << '\n';
            if (fg_n >= 2 && fg_t >= 1) std::cout << "edges_formula\t" << to_string(fiber_edge_count(fg_n, fg_t)) << '\n';
            std::cout << "connected\t" << (is_connected(g) ? "true" : "false") << "\nbipartite\t"
                      << (is_bipartite(g) ? "true" : "false") << '\n';
            if (fg_dot) write_dot(std::cout, g);
        } else if (*bc) {
            MarkovBasis basis;
            if (b_kind == "fiber") {
                if (!b_n) throw std::invalid_argument("--kind fiber needs --n");
                basis = fiber_basis(*b_n);
            } else {
                if (!b_t) throw std::invalid_argument("--kind orbit needs --t");
                basis = orbit_basis(*b_t);
            }
            std::cout << "# " << basis.size() << " moves\n";
            print_moves(basis);
            if (b_verify) {
                std::cout << "kernel\t" << (verify_kernel(basis) ? "true" : "false") << '\n';
                if (b_n && b_t) {
                    std::vector<std::vector<int>> pts;
                    if (b_kind == "fiber") {
                        pts = enumerate_fiber(*b_n, *b_t);
                    } else {
                        for (const auto& f : enumerate_orbits(*b_n, *b_t)) pts.emplace_back(f.freqs().begin(), f.freqs().end());
                    }
                    std::cout << "points\t" << pts.size() << "\nconnected\t"
                              << (verify_connectivity(basis, pts) ? "true" : "false") << '\n';
                }
            }
        } else if (*oc) {
            const FamilySpec family = parse_family(o_family);
            std::cout << "orbit\tcardinality\tprobability\tdecimal\n";
            const auto recs = orbit_records(o_n, o_t, family);
            for (const auto& r : recs) {
                std::cout << '(' << join(r.freq.representative()) << ")\t" << to_string(r.cardinality) << '\t';
                if (r.exact_probability) {
                    std::cout << to_string(*r.exact_probability) << '\t' << fixed(to_double(*r.exact_probability));
                } else {
                    std::cout << "-\t-";
                }
                std::cout << '\n';
            }
            if (family.has_exact_base_measure())
                std::cout << "C\t" << to_string(normalizing_constant(o_n, o_t, family).value) << '\n';
        } else if (*ec) {
            const FamilySpec family = parse_family(e_family);
            CdfEstimate cdf;
            if (e_method == "closed") {
                if (family.kind() != FamilyKind::poisson) throw std::invalid_argument("closed form needs poisson");
                cdf = binomial_closed_form_cdf(e_t, e_n1, e_n2);
            } else if (e_method == "convolution") {
                cdf = umpu_convolution_cdf(e_n1, e_n2, e_t, family);
            } else {
                cdf = exact_conditional_cdf(e_n1, e_n2, e_t, family);
            }
            print_cdf_row(cdf);
            if (e_u) print_p_values(cdf, *e_u);
        } else if (*mf) {
            run_chain(fa, false);
        } else if (*mo) {
            run_chain(oa, true);
        } else if (*pt) {
            const SampleVector y = sample_from(pa);
            const CdfEstimate e = permutation_test(y, p_reps, pa.seed);
            report_estimate(e);
        } else if (*sim) {
            std::vector<Scenario> scenarios;
            if (!s_set.empty()) {
                scenarios = table3_scenarios();
            } else {
                if (!s_n1 || !s_n2) throw std::invalid_argument("simulate needs --scenarios table3 or --n1 and --n2");
                scenarios.push_back(Scenario::make(*s_n1, *s_n2, s_mu1, s_mu2, builtin_family("poisson")));
            }
            StudyConfig cfg;
            cfg.perm_replications = s_perm;
            fs::create_directories(fs::path(s_out) / "traces");
            std::vector<BiasRecord> all;
            for (std::size_t i = 0; i < scenarios.size(); ++i) {
                const Scenario& s = scenarios[i];
                std::cerr << "scenario " << scenario_tag(s) << ": " << s_reps << " replicates\n";
                auto recs = run_scenario(s, s_reps, cfg, mix_seed(s_seed, i));
                all.insert(all.end(), recs.begin(), recs.end());
                if (s_trace_steps > 0) {
                    const SampleVector y = draw_replicate(s, recs.front().seed);
                    std::ofstream out(fs::path(s_out) / "traces" / (scenario_tag(s) + ".csv"));
                    write_trace_csv(out, convergence_trace(y, s.family, s_trace_steps, recs.front().seed));
                }
            }
            {
                std::ofstream out(fs::path(s_out) / "bias_records.csv");
                write_bias_csv(out, all);
            }
            {
                std::ofstream out(fs::path(s_out) / "summary.json");
                out << to_json(summarize(all)).dump(2) << '\n';
            }
            if (s_timing > 0) {
                std::ofstream out(fs::path(s_out) / "timing.json");
                out << to_json(timing_report(scenarios, cfg, s_timing, s_seed)).dump(2) << '\n';
            }
            for (const auto& row : summarize(all))
                std::cout << scenario_tag(row.scenario) << '\t' << to_string(row.method) << "\tmean " << fixed(row.mean, 4)
                          << "\trange " << fixed(row.range, 3) << "\tsd " << fixed(row.sd, 4) << "\tmad "
                          << fixed(row.mad, 4) << "\tmad0 " << fixed(row.mad0, 4) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
