#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitmc/family.hpp"
#include "orbitmc/numeric.hpp"
#include "orbitmc/orbit.hpp"

namespace orbitmc {

enum class CdfMethod { exact_enum, umpu_convolution, closed_form_binomial, mcmc_fiber, mcmc_orbit, permutation };

std::string_view to_string(CdfMethod m);

/// Exact or estimated conditional cdf of U given T = t.
struct CdfEstimate {
    CdfMethod method = CdfMethod::exact_enum;
    int t = 0;
    std::vector<double> values;          // F(0..t); empty when only the point estimate was requested
    std::vector<Rational> exact_values;  // filled by the exact methods
    std::optional<int> u_obs;
    std::optional<double> at_u_obs;      // estimate of F(u_obs)
    long steps = 0;
    long replications = 0;
    std::optional<std::uint64_t> seed;
    bool degenerate = false;
    std::vector<std::string> warnings;

    bool is_exact() const { return !exact_values.empty(); }
    bool has_full_cdf() const { return !values.empty(); }

    /// F(u) with F(u) = 0 for u < 0 and F(u) = 1 for u >= t.
    double operator()(long u) const;
    Rational exact(long u) const;
};

/// F(u) = sum_{U(y) <= u} prod H(y_i) / sum_y prod H(y_i) over F_{N,t}, by enumeration.
CdfEstimate exact_conditional_cdf(int n1, int n2, int t, const FamilySpec& family,
                                  std::uint64_t cap = kDefaultEnumerationCap);

/// P(U = u | T = t) through the split sums over F_{n1,u} and F_{n2,t-u}.
Rational umpu_pmf(int u, int n1, int n2, int t, const FamilySpec& family,
                  std::uint64_t cap = kDefaultEnumerationCap);

/// The whole pmf (u = 0..t) by the same route, sharing the split sums.
std::vector<Rational> umpu_pmf_all(int n1, int n2, int t, const FamilySpec& family,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// Cumulated umpu_pmf_all as a CdfEstimate.
CdfEstimate umpu_convolution_cdf(int n1, int n2, int t, const FamilySpec& family,
                                 std::uint64_t cap = kDefaultEnumerationCap);

/// P(Bin(t, n1/(n1+n2)) <= u), exactly.
CdfEstimate binomial_closed_form_cdf(int t, int n1, int n2);

/// Same closed form evaluated at a single u; used where only F(u_obs) is needed.
Rational binomial_closed_form_at(int u, int t, int n1, int n2);

/// F_U(u | pi) = (1/#pi) * #{y in pi : U(y) <= u}, by listing the orbit.
CdfEstimate orbit_cdf_exact(const FrequencyVector& f, int n1, std::uint64_t cap = kDefaultEnumerationCap);

template <class Scalar>
struct PValues {
    Scalar left;
    Scalar right;
    Scalar two_sided;
};

/// left = F(u_obs), right = 1 - F(u_obs - 1), two-sided = min{2 min{left, right}, 1}.
/// Throws std::out_of_range unless 0 <= u_obs <= t, std::invalid_argument when
/// the estimate has no full cdf.
PValues<double> p_values(const CdfEstimate& cdf, int u_obs);
PValues<Rational> exact_p_values(const CdfEstimate& cdf, int u_obs);

struct DispersionReport {
    int u = 0;
    Rational f_exact;         // F_U(u | F_{N,t})
    Rational mean_indicator;  // E_p[I(U <= u)]
    Rational mean_orbit;      // E_{p_pi}[F_U(u | pi)]
    Rational var_indicator;
    Rational var_orbit;
    Rational mad_indicator;
    Rational mad_orbit;
    bool lemma_bound_holds = true;  // |x - y| <= x - 2xy + y for every orbit
};

DispersionReport dispersion_report(int n1, int n2, int t, const FamilySpec& family, int u,
                                   std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace orbitmc
