#include "orbitmc/family.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orbitmc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

long require_param(const std::map<std::string, long>& params, const std::string& key, std::string_view family) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("family '" + std::string(family) + "' requires parameter " + key);
    return it->second;
}

void reject_unknown_params(const std::map<std::string, long>& params, std::initializer_list<const char*> allowed,
                           std::string_view family) {
    for (const auto& [key, value] : params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw std::invalid_argument("family '" + std::string(family) + "' has no parameter " + key);
    }
}

}  // namespace

FamilySpec FamilySpec::custom(std::string name, LogMeasure log_h, long support_min, std::optional<long> support_max,
                              ExactMeasure exact_h) {
    if (!log_h) throw std::invalid_argument("custom family needs a log base measure");
    if (support_min < 0 || (support_max && *support_max < support_min))
        throw std::invalid_argument("invalid support for custom family");
    FamilySpec f;
    f.kind_ = FamilyKind::custom;
    f.name_ = std::move(name);
    f.log_h_ = std::move(log_h);
    f.exact_h_ = std::move(exact_h);
    f.support_min_ = support_min;
    f.support_max_ = support_max;
    return f;
}

double FamilySpec::log_base_measure(long j) const {
    if (!in_support(j)) return kNegInf;
    return log_h_(j);
}

Rational FamilySpec::exact_base_measure(long j) const {
    if (!exact_h_) throw std::logic_error("family '" + name_ + "' has no exact base measure");
    if (!in_support(j)) return 0;
    return exact_h_(j);
}

std::vector<double> FamilySpec::log_base_measure_table(long max_j) const {
    std::vector<double> table(static_cast<std::size_t>(max_j) + 1);
    for (long j = 0; j <= max_j; ++j) table[j] = log_base_measure(j);
    return table;
}

std::string FamilySpec::describe() const {
    std::ostringstream os;
    os << name_;
    const char* sep = ":";
    for (const auto& [key, value] : params_) {
        os << sep << key << '=' << value;
        sep = ",";
    }
    return os.str();
}

FamilySpec builtin_family(std::string_view name, const std::map<std::string, long>& params) {
    FamilySpec f;
    f.name_ = std::string(name);
    if (name == "poisson") {
        reject_unknown_params(params, {}, name);
        f.kind_ = FamilyKind::poisson;
        f.log_h_ = [](long y) { return -std::lgamma(static_cast<double>(y) + 1.0); };
        f.exact_h_ = [](long y) { return Rational(1, factorial(static_cast<unsigned long>(y))); };
        f.psi_doc_ = "log(mu)";
        f.g_doc_ = "exp(-mu)";
    } else if (name == "geometric") {
        reject_unknown_params(params, {}, name);
        f.kind_ = FamilyKind::geometric;
        f.log_h_ = [](long) { return 0.0; };
        f.exact_h_ = [](long) { return Rational(1); };
        f.psi_doc_ = "log(1-mu)";
        f.g_doc_ = "mu";
    } else if (name == "binomial") {
        reject_unknown_params(params, {"k"}, name);
        const long k = require_param(params, "k", name);
        if (k < 1) throw std::invalid_argument("binomial requires k >= 1");
        f.kind_ = FamilyKind::binomial;
        f.params_ = params;
        f.support_max_ = k;
        f.log_h_ = [k](long y) { return log_binomial(static_cast<double>(k), static_cast<double>(y)); };
        f.exact_h_ = [k](long y) { return Rational(binomial(k, y)); };
        f.psi_doc_ = "log(mu/(1-mu))";
        f.g_doc_ = "(1-mu)^k";
    } else if (name == "log_series") {
        reject_unknown_params(params, {}, name);
        f.kind_ = FamilyKind::log_series;
        f.support_min_ = 1;
        f.log_h_ = [](long y) { return -std::log(static_cast<double>(y)); };
        f.exact_h_ = [](long y) { return Rational(1, y); };
        f.psi_doc_ = "log(mu)";
        f.g_doc_ = "-1/log(1-mu)";
    } else if (name == "lost_games") {
        reject_unknown_params(params, {"j", "a"}, name);
        const long j = require_param(params, "j", name);
        const long a = require_param(params, "a", name);
        if (j < 0 || a <= 0) throw std::invalid_argument("lost_games requires j >= 0 and a > 0");
        f.kind_ = FamilyKind::lost_games;
        f.params_ = params;
        f.support_min_ = j;
        f.log_h_ = [j, a](long y) {
            const double m = static_cast<double>(2 * y + a - 2 * j);
            return log_binomial(m, static_cast<double>(y - j)) + std::log(static_cast<double>(a)) - std::log(m);
        };
        f.exact_h_ = [j, a](long y) {
            const long m = 2 * y + a - 2 * j;
            Rational r(binomial(m, y - j) * a, BigInt(m));
            r.canonicalize();
            return r;
        };
        f.psi_doc_ = "log(mu(1-mu))";
        f.g_doc_ = "mu^(a-j) (1-mu)^(-j)";
    } else {
        throw std::invalid_argument("unknown family '" + std::string(name) + "'");
    }
    return f;
}

FamilySpec parse_family(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    std::map<std::string, long> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0)
                throw std::invalid_argument("malformed family parameter '" + std::string(item) + "'");
            const std::string value(item.substr(eq + 1));
            std::size_t used = 0;
            long v = 0;
            try {
                v = std::stol(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != value.size())
                throw std::invalid_argument("non-integer family parameter '" + std::string(item) + "'");
            params[std::string(item.substr(0, eq))] = v;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    return builtin_family(name, params);
}

std::vector<int> sample_iid(const FamilySpec& family, double mu, int n, Rng& rng) {
    if (family.kind() != FamilyKind::poisson)
        throw std::invalid_argument("data generation is only supported for the poisson family");
    if (!(mu > 0.0) || mu > 700.0) throw std::invalid_argument("poisson mean must lie in (0, 700]");
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    std::vector<int> out(static_cast<std::size_t>(n));
    const double p0 = std::exp(-mu);
    for (auto& y : out) {
        // Inversion: smallest k with F(k) > u.
        const double u = rng.uniform01();
        double p = p0;
        double cdf = p0;
        int k = 0;
        while (u >= cdf && p > 0.0) {
            ++k;
            p *= mu / k;
            cdf += p;
        }
        y = k;
    }
    return out;
}

Scenario Scenario::make(int n1, int n2, double mu1, double mu2, FamilySpec family) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("scenario group sizes must be >= 1");
    if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw std::invalid_argument("scenario means must be positive");
    return Scenario{n1, n2, mu1, mu2, std::move(family)};
}

}  // namespace orbitmc
