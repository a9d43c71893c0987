#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orbitmc/family.hpp"
#include "orbitmc/numeric.hpp"
#include "orbitmc/random.hpp"

namespace orbitmc {

/// An orbit of permutations in F_{N,t}, identified by its value frequencies:
/// freqs[j] = number of entries equal to j, j = 0..t.
class FrequencyVector {
public:
    /// Throws std::invalid_argument unless all counts are non-negative, the
    /// vector is non-empty and sum_j j*f_j = freqs.size() - 1.
    explicit FrequencyVector(std::vector<int> freqs);

    std::span<const int> freqs() const { return freqs_; }
    int operator[](std::size_t j) const { return freqs_[j]; }
    int n() const { return n_; }
    int t() const { return static_cast<int>(freqs_.size()) - 1; }

    /// The arrangement with values in decreasing order, e.g. (3,2,1).
    std::vector<int> representative() const;

    friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;
    friend auto operator<=>(const FrequencyVector& a, const FrequencyVector& b) {
        return a.freqs_ <=> b.freqs_;
    }

private:
    std::vector<int> freqs_;
    int n_;
};

/// Partitions of t into at most n parts: p(t,n) = p(t,n-1) + p(t-n,n).
BigInt partition_count(long t, long n);

FrequencyVector to_frequency(std::span<const int> y);

/// #pi = N! / (f_0! ... f_t!).
BigInt orbit_cardinality(const FrequencyVector& f);

/// One frequency vector per partition of t into <= n parts, parts enumerated in
/// reverse lexicographic order: (t), (t-1,1), (t-2,2), (t-2,1,1), ...
std::vector<FrequencyVector> enumerate_orbits(int n, int t, std::uint64_t cap = kDefaultEnumerationCap);

/// log #pi + sum_j f_j log H(j); -inf when the orbit leaves the support.
double orbit_log_weight(const FrequencyVector& f, const FamilySpec& family);

/// #pi * prod_j H(j)^{f_j}, exactly.
Rational orbit_exact_weight(const FrequencyVector& f, const FamilySpec& family);

/// The constant C making the orbit probabilities of F_{N,t} sum to one.
struct NormalizingConstant {
    Rational value;
    int n;
    int t;
};

NormalizingConstant normalizing_constant(int n, int t, const FamilySpec& family,
                                         std::uint64_t cap = kDefaultEnumerationCap);

/// p_pi(f) = #pi * C * prod_j H(j)^{f_j}. Throws std::invalid_argument when C
/// was computed for a different (N, t).
Rational orbit_probability(const FrequencyVector& f, const FamilySpec& family, const NormalizingConstant& c);

struct OrbitRecord {
    FrequencyVector freq;
    BigInt cardinality;
    double log_weight;
    std::optional<Rational> exact_probability;
};

/// All orbits of F_{N,t} with cardinalities and weights; exact probabilities
/// when the family has an exact base measure.
std::vector<OrbitRecord> orbit_records(int n, int t, const FamilySpec& family,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// A uniformly random arrangement of the orbit's multiset.
std::vector<int> sample_within_orbit(const FrequencyVector& f, Rng& rng);

}  // namespace orbitmc
