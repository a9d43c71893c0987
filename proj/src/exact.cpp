#include "orbitmc/exact.hpp"

#include <algorithm>
#include <stdexcept>

#include "orbitmc/fiber.hpp"

namespace orbitmc {

std::string_view to_string(CdfMethod m) {
    switch (m) {
        case CdfMethod::exact_enum: return "exact_enum";
        case CdfMethod::umpu_convolution: return "umpu_convolution";
        case CdfMethod::closed_form_binomial: return "closed_form_binomial";
        case CdfMethod::mcmc_fiber: return "mcmc_fiber";
        case CdfMethod::mcmc_orbit: return "mcmc_orbit";
        case CdfMethod::permutation: return "permutation";
    }
    return "unknown";
}

double CdfEstimate::operator()(long u) const {
    if (u < 0) return 0.0;
    if (u >= t) return 1.0;
    if (!values.empty()) return values[static_cast<std::size_t>(u)];
    if (u_obs && at_u_obs && u == *u_obs) return *at_u_obs;
    throw std::invalid_argument("estimate only covers F(u_obs)");
}

Rational CdfEstimate::exact(long u) const {
    if (u < 0) return 0;
    if (u >= t) return 1;
    if (exact_values.empty()) throw std::invalid_argument("estimate carries no exact values");
    return exact_values[static_cast<std::size_t>(u)];
}

namespace {

std::vector<Rational> exact_h_table(const FamilySpec& family, int t) {
    if (!family.has_exact_base_measure())
        throw std::logic_error("family '" + family.name() + "' has no exact base measure");
    std::vector<Rational> h(static_cast<std::size_t>(t) + 1);
    for (int j = 0; j <= t; ++j) h[j] = family.exact_base_measure(j);
    return h;
}

void check_cap(int n, int t, std::uint64_t cap) {
    const BigInt size = fiber_cardinality(n, t);
    if (size > BigInt(std::to_string(cap)))
        throw EnumerationCapExceeded("fiber F_{" + std::to_string(n) + "," + std::to_string(t) + "} has " +
                                     size.get_str() + " points, above the cap of " + std::to_string(cap));
}

Rational point_weight(std::span<const int> y, const std::vector<Rational>& h) {
    Rational w = 1;
    for (int v : y) {
        w *= h[v];
        if (w == 0) break;
    }
    return w;
}

CdfEstimate exact_cdf_from_masses(CdfMethod method, int t, std::vector<Rational> mass) {
    Rational total = 0;
    for (const auto& m : mass) total += m;
    if (total == 0) throw std::domain_error("fiber has no point inside the family's support");
    CdfEstimate out;
    out.method = method;
    out.t = t;
    Rational running = 0;
    for (const auto& m : mass) {
        running += m;
        Rational f = running / total;
        f.canonicalize();
        out.values.push_back(to_double(f));
        out.exact_values.push_back(std::move(f));
    }
    return out;
}

void validate_sizes(int n1, int n2, int t) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("group sizes must be >= 1");
    if (t < 0) throw std::invalid_argument("t must be >= 0");
}

}  // namespace

CdfEstimate exact_conditional_cdf(int n1, int n2, int t, const FamilySpec& family, std::uint64_t cap) {
    validate_sizes(n1, n2, t);
    check_cap(n1 + n2, t, cap);
    const auto h = exact_h_table(family, t);
    std::vector<Rational> mass(static_cast<std::size_t>(t) + 1, 0);
    for_each_fiber_point(n1 + n2, t, [&](std::span<const int> y) {
        mass[static_cast<std::size_t>(statistic_u(y, n1))] += point_weight(y, h);
    });
    return exact_cdf_from_masses(CdfMethod::exact_enum, t, std::move(mass));
}

std::vector<Rational> umpu_pmf_all(int n1, int n2, int t, const FamilySpec& family, std::uint64_t cap) {
    validate_sizes(n1, n2, t);
    check_cap(std::max(n1, n2), t, cap);
    const auto h = exact_h_table(family, t);
    // split[n][x] = sum over F_{n,x} of prod H(y_i)
    const auto split_sums = [&](int n) {
        std::vector<Rational> s(static_cast<std::size_t>(t) + 1, 0);
        for (int x = 0; x <= t; ++x)
            for_each_fiber_point(n, x, [&](std::span<const int> y) { s[x] += point_weight(y, h); });
        return s;
    };
    const auto s1 = split_sums(n1);
    const auto s2 = n2 == n1 ? s1 : split_sums(n2);
    std::vector<Rational> pmf(static_cast<std::size_t>(t) + 1);
    Rational total = 0;
    for (int u = 0; u <= t; ++u) {
        pmf[u] = s1[u] * s2[t - u];
        total += pmf[u];
    }
    if (total == 0) throw std::domain_error("fiber has no point inside the family's support");
    for (auto& p : pmf) {
        p /= total;
        p.canonicalize();
    }
    return pmf;
}

Rational umpu_pmf(int u, int n1, int n2, int t, const FamilySpec& family, std::uint64_t cap) {
    if (u < 0 || u > t) throw std::out_of_range("u outside [0, t]");
    return umpu_pmf_all(n1, n2, t, family, cap)[static_cast<std::size_t>(u)];
}

CdfEstimate umpu_convolution_cdf(int n1, int n2, int t, const FamilySpec& family, std::uint64_t cap) {
    return exact_cdf_from_masses(CdfMethod::umpu_convolution, t, umpu_pmf_all(n1, n2, t, family, cap));
}

CdfEstimate binomial_closed_form_cdf(int t, int n1, int n2) {
    validate_sizes(n1, n2, t);
    // P(Bin = k) proportional to C(t,k) n1^k n2^(t-k); the common factor is N^t.
    std::vector<Rational> mass(static_cast<std::size_t>(t) + 1);
    BigInt p1;
    BigInt p2;
    for (int k = 0; k <= t; ++k) {
        mpz_ui_pow_ui(p1.get_mpz_t(), static_cast<unsigned long>(n1), static_cast<unsigned long>(k));
        mpz_ui_pow_ui(p2.get_mpz_t(), static_cast<unsigned long>(n2), static_cast<unsigned long>(t - k));
        mass[k] = Rational(binomial(t, k) * p1 * p2);
    }
    return exact_cdf_from_masses(CdfMethod::closed_form_binomial, t, std::move(mass));
}

Rational binomial_closed_form_at(int u, int t, int n1, int n2) {
    validate_sizes(n1, n2, t);
    if (u < 0) return 0;
    if (u >= t) return 1;
    BigInt num = 0;
    BigInt p1;
    BigInt p2;
    for (int k = 0; k <= u; ++k) {
        mpz_ui_pow_ui(p1.get_mpz_t(), static_cast<unsigned long>(n1), static_cast<unsigned long>(k));
        mpz_ui_pow_ui(p2.get_mpz_t(), static_cast<unsigned long>(n2), static_cast<unsigned long>(t - k));
        num += binomial(t, k) * p1 * p2;
    }
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n1 + n2), static_cast<unsigned long>(t));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

CdfEstimate orbit_cdf_exact(const FrequencyVector& f, int n1, std::uint64_t cap) {
    if (n1 < 0 || n1 > f.n()) throw std::invalid_argument("n1 outside [0, N]");
    const BigInt card = orbit_cardinality(f);
    if (card > BigInt(std::to_string(cap)))
        throw EnumerationCapExceeded("orbit has " + card.get_str() + " arrangements, above the cap of " +
                                     std::to_string(cap));
    std::vector<int> y = f.representative();
    std::sort(y.begin(), y.end());
    std::vector<Rational> mass(static_cast<std::size_t>(f.t()) + 1, 0);
    do {
        mass[static_cast<std::size_t>(statistic_u(y, n1))] += 1;
    } while (std::next_permutation(y.begin(), y.end()));
    return exact_cdf_from_masses(CdfMethod::exact_enum, f.t(), std::move(mass));
}

namespace {

template <class Scalar, class Lookup>
PValues<Scalar> p_values_from(const CdfEstimate& cdf, int u_obs, Lookup&& value_at) {
    if (u_obs < 0 || u_obs > cdf.t) throw std::out_of_range("u_obs outside [0, t]");
    const Scalar left = value_at(u_obs);
    const Scalar right = Scalar(1) - (u_obs == 0 ? Scalar(0) : value_at(u_obs - 1));
    Scalar two = 2 * std::min<Scalar>(left, right);
    if (two > 1) two = 1;
    return {left, right, two};
}

}  // namespace

PValues<double> p_values(const CdfEstimate& cdf, int u_obs) {
    if (!cdf.has_full_cdf()) throw std::invalid_argument("p-values need the full cdf");
    return p_values_from<double>(cdf, u_obs, [&](long u) { return cdf(u); });
}

PValues<Rational> exact_p_values(const CdfEstimate& cdf, int u_obs) {
    if (!cdf.is_exact()) throw std::invalid_argument("exact p-values need an exact cdf");
    return p_values_from<Rational>(cdf, u_obs, [&](long u) { return cdf.exact(u); });
}

DispersionReport dispersion_report(int n1, int n2, int t, const FamilySpec& family, int u, std::uint64_t cap) {
    validate_sizes(n1, n2, t);
    if (u < 0 || u > t) throw std::out_of_range("u outside [0, t]");
    const int n = n1 + n2;
    check_cap(n, t, cap);

    DispersionReport r;
    r.u = u;
    r.f_exact = umpu_convolution_cdf(n1, n2, t, family, cap).exact(u);
    const Rational& centre = r.f_exact;

    // Indicator estimator, weighted by p(y) over the fiber.
    const auto h = exact_h_table(family, t);
    std::vector<std::pair<Rational, bool>> points;
    Rational fiber_total = 0;
    for_each_fiber_point(n, t, [&](std::span<const int> y) {
        Rational w = point_weight(y, h);
        fiber_total += w;
        points.emplace_back(std::move(w), statistic_u(y, n1) <= u);
    });
    r.mean_indicator = 0;
    for (const auto& [w, ind] : points)
        if (ind) r.mean_indicator += w;
    r.mean_indicator /= fiber_total;
    r.var_indicator = 0;
    r.mad_indicator = 0;
    for (const auto& [w, ind] : points) {
        const Rational p = w / fiber_total;
        const Rational x(ind ? 1 : 0);
        r.var_indicator += p * (x - r.mean_indicator) * (x - r.mean_indicator);
        r.mad_indicator += p * abs(x - centre);
    }

    // Orbit estimator, weighted by p_pi over the orbits.
    std::vector<std::pair<Rational, Rational>> orbits;  // (weight, F_U(u | pi))
    Rational orbit_total = 0;
    for (const auto& f : enumerate_orbits(n, t, cap)) {
        Rational w = orbit_exact_weight(f, family);
        orbit_total += w;
        orbits.emplace_back(std::move(w), orbit_cdf_exact(f, n1, cap).exact(u));
    }
    r.mean_orbit = 0;
    for (const auto& [w, fu] : orbits) r.mean_orbit += w * fu;
    r.mean_orbit /= orbit_total;
    r.var_orbit = 0;
    r.mad_orbit = 0;
    for (const auto& [w, fu] : orbits) {
        const Rational p = w / orbit_total;
        r.var_orbit += p * (fu - r.mean_orbit) * (fu - r.mean_orbit);
        r.mad_orbit += p * abs(fu - centre);
        if (abs(centre - fu) > centre - 2 * centre * fu + fu) r.lemma_bound_holds = false;
    }
    for (Rational* q : {&r.mean_indicator, &r.mean_orbit, &r.var_indicator, &r.var_orbit, &r.mad_indicator,
                        &r.mad_orbit})
        q->canonicalize();
    return r;
}

}  // namespace orbitmc
