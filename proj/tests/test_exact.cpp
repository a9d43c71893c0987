#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "orbitmc/exact.hpp"
#include "orbitmc/fiber.hpp"

using namespace orbitmc;

namespace {

const std::vector<double> kPrintedCdf{0.001, 0.018, 0.100, 0.320, 0.649, 0.912, 1.0};

oracle::Rational closed_form(int u, int t, int n1, int n2) {
    const oracle::Rational th = oracle::frac(n1, n1 + n2);
    oracle::Rational s = 0;
    for (int k = 0; k <= u; ++k) {
        oracle::Rational term = oracle::choose(t, k);
        for (int i = 0; i < k; ++i) term *= th;
        for (int i = 0; i < t - k; ++i) term *= 1 - th;
        s += term;
    }
    return s;
}

}  // namespace

TEST_CASE("enumeration cdf for (2,1,6)") {
    const auto cdf = exact_conditional_cdf(2, 1, 6, builtin_family("poisson"));
    REQUIRE(cdf.exact_values.size() == 7);
    CHECK(cdf.is_exact());
    for (int u = 0; u <= 6; ++u) CHECK(std::abs(to_double(cdf.exact_values[u]) - kPrintedCdf[u]) <= 5e-4);
    CHECK(cdf.exact_values.back() == 1);
    CHECK(cdf(-1) == 0.0);
    CHECK(cdf(9) == 1.0);
}

TEST_CASE("degenerate and uniform cdfs") {
    const auto zero = exact_conditional_cdf(2, 3, 0, builtin_family("poisson"));
    REQUIRE(zero.exact_values.size() == 1);
    CHECK(zero.exact_values[0] == 1);

    const auto geo = exact_conditional_cdf(2, 1, 6, builtin_family("geometric"));
    for (int u = 0; u <= 6; ++u) CHECK(geo.exact_values[u] == oracle::frac((u + 1) * (u + 2) / 2, 28));
}

TEST_CASE("split-sum pmf") {
    const auto p = builtin_family("poisson");
    CHECK(umpu_pmf(3, 2, 1, 6, p) == oracle::frac(160, 729));
    const auto pmf = umpu_pmf_all(2, 1, 6, p);
    Rational total = 0;
    for (const auto& q : pmf) total += q;
    CHECK(total == 1);
    const auto via_split = umpu_convolution_cdf(2, 1, 6, p);
    const auto via_fiber = exact_conditional_cdf(2, 1, 6, p);
    CHECK(via_split.exact_values == via_fiber.exact_values);

    const auto b = parse_family("binomial:k=3");
    CHECK(umpu_convolution_cdf(2, 2, 7, b).exact_values ==
          exact_conditional_cdf(2, 2, 7, b).exact_values);
}

TEST_CASE("binomial closed form") {
    const auto cf = binomial_closed_form_cdf(6, 2, 1);
    CHECK(cf.exact_values[4] == oracle::frac(473, 729));
    CHECK(cf.exact_values[0] == oracle::frac(1, 729));
    CHECK(cf.exact_values[6] == 1);
    CHECK(binomial_closed_form_at(4, 6, 2, 1) == oracle::frac(473, 729));
    CHECK(binomial_closed_form_at(-1, 6, 2, 1) == 0);
    CHECK(binomial_closed_form_at(9, 6, 2, 1) == 1);
}

TEST_CASE("three exact routes agree for poisson") {
    const auto p = builtin_family("poisson");
    for (int n1 = 1; n1 <= 4; ++n1)
        for (int n2 = 1; n1 + n2 <= 5; ++n2)
            for (int t = 0; t <= 10; ++t) {
                const auto e = exact_conditional_cdf(n1, n2, t, p).exact_values;
                const auto c = umpu_convolution_cdf(n1, n2, t, p).exact_values;
                const auto b = binomial_closed_form_cdf(t, n1, n2).exact_values;
                CHECK(e == c);
                CHECK(e == b);
                for (int u = 0; u <= t; ++u) CHECK(b[u] == closed_form(u, t, n1, n2));
            }
}

TEST_CASE("enumeration cdf against a brute-force fiber sum") {
    for (const auto& [fam, h] : {std::pair{builtin_family("poisson"), oracle::poisson_h},
                                 std::pair{builtin_family("geometric"), oracle::geometric_h}})
        for (int n1 = 1; n1 <= 3; ++n1)
            for (int n2 = 1; n2 <= 2; ++n2)
                for (int t = 0; t <= 6; ++t)
                    CHECK(exact_conditional_cdf(n1, n2, t, fam).exact_values == oracle::cdf_by_fiber(n1, n2, t, h));
}

TEST_CASE("orbit cdfs") {
    const auto a = orbit_cdf_exact(to_frequency(std::vector<int>{1, 2, 3}), 2);
    const std::vector<Rational> expect_a{0, 0, 0, oracle::frac(1, 3), oracle::frac(2, 3), 1, 1};
    CHECK(a.exact_values == expect_a);
    const auto b = orbit_cdf_exact(to_frequency(std::vector<int>{2, 2, 2}), 2);
    const std::vector<Rational> expect_b{0, 0, 0, 0, 1, 1, 1};
    CHECK(b.exact_values == expect_b);
    // single-element orbit (0,0,5) with n1 = 1: step from u = 0 on
    const auto c = orbit_cdf_exact(to_frequency(std::vector<int>{5, 5}), 1);
    CHECK(c.exact_values[4] == 0);
    CHECK(c.exact_values[5] == 1);
    // against listing the arrangements
    const std::vector<int> y{0, 1, 1, 3, 2};
    const auto arr = oracle::arrangements(y);
    const auto d = orbit_cdf_exact(to_frequency(y), 2);
    for (int u = 0; u <= 7; ++u) {
        long below = 0;
        for (const auto& v : arr) below += (v[0] + v[1] <= u);
        CHECK(d.exact_values[u] == oracle::frac(below, static_cast<long>(arr.size())));
    }
}

TEST_CASE("p-values") {
    const auto cdf = exact_conditional_cdf(2, 1, 6, builtin_family("poisson"));
    const auto pv = p_values(cdf, 2);
    CHECK(std::abs(pv.left - 0.100) <= 5e-4);
    CHECK(std::abs(pv.right - 0.982) <= 5e-4);
    CHECK(std::abs(pv.two_sided - 0.200) <= 1e-3);
    const auto px = exact_p_values(cdf, 2);
    CHECK(px.left == oracle::frac(73, 729));
    CHECK(px.right == 1 - oracle::frac(13, 729));
    CHECK(px.two_sided == oracle::frac(146, 729));
    const auto p0 = exact_p_values(cdf, 0);
    CHECK(p0.right == 1);
    const auto p6 = exact_p_values(cdf, 6);
    CHECK(p6.left == 1);
    CHECK(p6.two_sided == 2 * p6.right);
    CHECK_THROWS_AS(p_values(cdf, 7), std::out_of_range);
    CHECK_THROWS_AS(p_values(cdf, -1), std::out_of_range);
    CdfEstimate point;
    point.t = 6;
    point.at_u_obs = 0.5;
    CHECK_THROWS_AS(p_values(point, 2), std::invalid_argument);
}

TEST_CASE("dispersion report on the worked example") {
    const auto p = builtin_family("poisson");
    const auto r = dispersion_report(2, 1, 6, p, 2);
    CHECK(r.f_exact == oracle::frac(73, 729));
    CHECK(r.var_indicator == oracle::frac(73, 729) * oracle::frac(656, 729));
    const auto top = dispersion_report(2, 1, 6, p, 6);
    CHECK(top.var_indicator == 0);
    CHECK(top.var_orbit == 0);
    CHECK(top.mad_indicator == 0);
    CHECK(top.mad_orbit == 0);
    for (int u = 0; u <= 6; ++u) {
        const auto d = dispersion_report(2, 1, 6, p, u);
        CHECK(d.var_indicator >= d.var_orbit);
        CHECK(d.mad_indicator >= d.mad_orbit);
    }
}

TEST_CASE("unbiasedness and dispersion ordering on the small grid") {
    for (const auto& fam : {builtin_family("poisson"), builtin_family("geometric")})
        for (int n = 2; n <= 4; ++n)
            for (int n1 = 1; n1 < n; ++n1)
                for (int t = 0; t <= 8; ++t)
                    for (int u = 0; u <= t; ++u) {
                        const auto d = dispersion_report(n1, n - n1, t, fam, u);
                        CHECK(d.mean_indicator == d.f_exact);
                        CHECK(d.mean_orbit == d.f_exact);
                        CHECK(d.var_indicator == d.f_exact * (1 - d.f_exact));
                        CHECK(d.var_indicator >= d.var_orbit);
                        CHECK(d.mad_indicator >= d.mad_orbit);
                        CHECK(d.lemma_bound_holds);
                    }
}
