#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitmc/numeric.hpp"
#include "orbitmc/random.hpp"

namespace orbitmc {

enum class FamilyKind { poisson, geometric, binomial, log_series, lost_games, custom };

/// A non-negative discrete exponential family f(y|mu) = G(mu) H(y) exp{y psi(mu)},
/// described through its base measure H only.
///
/// H is exposed in log space (-inf outside the support). Families that can also
/// provide H as an exact rational carry an exact hook, which is what the
/// enumeration oracles consume.
class FamilySpec {
public:
    using LogMeasure = std::function<double(long)>;
    using ExactMeasure = std::function<Rational(long)>;

    static FamilySpec custom(std::string name, LogMeasure log_h, long support_min,
                             std::optional<long> support_max = std::nullopt,
                             ExactMeasure exact_h = {});

    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    long support_min() const { return support_min_; }
    std::optional<long> support_max() const { return support_max_; }

    bool in_support(long j) const {
        return j >= support_min_ && (!support_max_ || j <= *support_max_);
    }

    /// log H(j); exactly -inf outside the support.
    double log_base_measure(long j) const;

    bool has_exact_base_measure() const { return static_cast<bool>(exact_h_); }

    /// H(j) as an exact rational, 0 outside the support. Throws std::logic_error
    /// when the family has no exact hook.
    Rational exact_base_measure(long j) const;

    /// log H(0..max_j), the lookup table the samplers use.
    std::vector<double> log_base_measure_table(long max_j) const;

    const std::string& natural_param_doc() const { return psi_doc_; }
    const std::string& normalizer_doc() const { return g_doc_; }

    /// Canonical CLI spelling, e.g. "binomial:k=5".
    std::string describe() const;

private:
    friend FamilySpec builtin_family(std::string_view, const std::map<std::string, long>&);

    FamilySpec() = default;

    FamilyKind kind_ = FamilyKind::custom;
    std::string name_;
    std::map<std::string, long> params_;
    LogMeasure log_h_;
    ExactMeasure exact_h_;
    long support_min_ = 0;
    std::optional<long> support_max_;
    std::string psi_doc_;
    std::string g_doc_;
};

/// One of poisson, geometric, binomial (k), log_series, lost_games (j, a).
/// Throws std::invalid_argument on an unknown name or invalid parameters.
FamilySpec builtin_family(std::string_view name, const std::map<std::string, long>& params = {});

/// Parses "name" or "name:key=value,key=value".
FamilySpec parse_family(std::string_view text);

/// n iid draws at mean parameter mu. Only Poisson supports data generation
/// (inversion from the stream); other families throw std::invalid_argument.
std::vector<int> sample_iid(const FamilySpec& family, double mu, int n, Rng& rng);

struct Scenario {
    int n1 = 1;
    int n2 = 1;
    double mu1 = 1.0;
    double mu2 = 1.0;
    FamilySpec family;

    /// Validates sizes and parameters.
    static Scenario make(int n1, int n2, double mu1, double mu2, FamilySpec family);
};

}  // namespace orbitmc
