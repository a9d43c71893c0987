#include "doctest.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "orbitmc/family.hpp"

using namespace orbitmc;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

TEST_CASE("poisson base measure is 1/y!") {
    const auto p = builtin_family("poisson");
    CHECK(p.log_base_measure(3) == doctest::Approx(-std::log(6.0)).epsilon(1e-15));
    CHECK(p.log_base_measure(0) == 0.0);
    CHECK(p.exact_base_measure(5) == oracle::frac(1, 120));
    CHECK(p.log_base_measure(-1) == kNegInf);
    for (long j = 0; j < 200; ++j)
        CHECK(std::abs(p.log_base_measure(j + 1) - p.log_base_measure(j) + std::log(j + 1.0)) < 1e-12);
}

TEST_CASE("geometric base measure is constant") {
    const auto g = builtin_family("geometric");
    CHECK(g.log_base_measure(17) == 0.0);
    CHECK(g.exact_base_measure(40) == 1);
}

TEST_CASE("binomial support stops at k") {
    const auto b = builtin_family("binomial", {{"k", 2}});
    CHECK(b.log_base_measure(3) == kNegInf);
    CHECK(b.exact_base_measure(3) == 0);
    CHECK(b.exact_base_measure(1) == 2);
    CHECK(b.support_max() == 2);
    CHECK_THROWS_AS(builtin_family("binomial", {{"k", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family("binomial"), std::invalid_argument);
}

TEST_CASE("log-series and lost-games") {
    const auto ls = builtin_family("log_series");
    CHECK(ls.support_min() == 1);
    CHECK(ls.log_base_measure(0) == kNegInf);
    CHECK(ls.exact_base_measure(4) == oracle::frac(1, 4));

    const auto lg = builtin_family("lost_games", {{"j", 1}, {"a", 3}});
    CHECK(lg.support_min() == 1);
    CHECK(lg.log_base_measure(0) == kNegInf);
    // H(y) = C(2y + a - 2j, y - j) a / (2y + a - 2j)
    for (int y = 1; y < 12; ++y) {
        const oracle::Rational h = oracle::frac(oracle::choose(2 * y + 3 - 2, y - 1) * 3, 2 * y + 3 - 2);
        CHECK(lg.exact_base_measure(y) == h);
        CHECK(lg.log_base_measure(y) == doctest::Approx(std::log(h.get_d())).epsilon(1e-12));
    }
    CHECK_THROWS_AS(builtin_family("lost_games", {{"j", 0}, {"a", 0}}), std::invalid_argument);
}

TEST_CASE("every builtin is finite exactly on its support") {
    for (const auto& text : {"poisson", "geometric", "binomial:k=5", "log_series", "lost_games:j=2,a=1"}) {
        const auto fam = parse_family(text);
        for (long j = 0; j < 30; ++j) {
            const double v = fam.log_base_measure(j);
            if (fam.in_support(j)) {
                CHECK(std::isfinite(v));
                CHECK(std::exp(v) > 0.0);
            } else {
                CHECK(v == kNegInf);
            }
        }
        CHECK(fam.log_base_measure(7) == fam.log_base_measure(7));
    }
}

TEST_CASE("family strings") {
    CHECK(parse_family("binomial:k=5").describe() == "binomial:k=5");
    CHECK(parse_family("poisson").kind() == FamilyKind::poisson);
    CHECK(parse_family("lost_games:j=1,a=3").kind() == FamilyKind::lost_games);
    CHECK_THROWS_AS(parse_family("gaussian"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("binomial:k"), std::invalid_argument);
}

TEST_CASE("custom family") {
    const auto c = FamilySpec::custom("half", [](long j) { return -std::log(2.0) * static_cast<double>(j); }, 0,
                                      std::nullopt, [](long j) { return oracle::frac(1, mpz_class(1) << j); });
    CHECK(c.kind() == FamilyKind::custom);
    CHECK(c.exact_base_measure(3) == oracle::frac(1, 8));
    const auto no_exact = FamilySpec::custom("x", [](long) { return 0.0; }, 0);
    CHECK_FALSE(no_exact.has_exact_base_measure());
    CHECK_THROWS_AS(no_exact.exact_base_measure(1), std::logic_error);
}

TEST_CASE("poisson sampling") {
    const auto p = builtin_family("poisson");
    Rng a(99), b(99);
    CHECK(sample_iid(p, 1.0, 5, a) == sample_iid(p, 1.0, 5, b));

    Rng r1(2024);
    const auto s1 = sample_iid(p, 1.0, 100000, r1);
    const double m1 = std::accumulate(s1.begin(), s1.end(), 0.0) / s1.size();
    CHECK(std::abs(m1 - 1.0) < 0.02);

    Rng r2(7);
    const auto s2 = sample_iid(p, 2.0, 100000, r2);
    const double m2 = std::accumulate(s2.begin(), s2.end(), 0.0) / s2.size();
    double ss = 0.0;
    for (int v : s2) ss += (v - m2) * (v - m2);
    CHECK(std::abs(ss / (s2.size() - 1) - 2.0) < 0.05);

    Rng r3(1);
    CHECK_THROWS_AS(sample_iid(builtin_family("geometric"), 0.5, 3, r3), std::invalid_argument);
    CHECK_THROWS_AS(sample_iid(p, -1.0, 3, r3), std::invalid_argument);
}

TEST_CASE("scenario validation") {
    const auto p = builtin_family("poisson");
    CHECK_NOTHROW(Scenario::make(6, 4, 1.0, 1.5, p));
    CHECK_THROWS_AS(Scenario::make(0, 4, 1.0, 1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::make(6, 4, 0.0, 1.0, p), std::invalid_argument);
}
