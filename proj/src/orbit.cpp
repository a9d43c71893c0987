#include "orbitmc/orbit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace orbitmc {

FrequencyVector::FrequencyVector(std::vector<int> freqs) : freqs_(std::move(freqs)), n_(0) {
    if (freqs_.empty()) throw std::invalid_argument("frequency vector must have at least one slot");
    long weighted = 0;
    for (std::size_t j = 0; j < freqs_.size(); ++j) {
        if (freqs_[j] < 0) throw std::invalid_argument("frequencies must be non-negative");
        n_ += freqs_[j];
        weighted += static_cast<long>(j) * freqs_[j];
    }
    if (weighted != t()) throw std::invalid_argument("sum_j j*f_j must equal t = size - 1");
    if (n_ < 1) throw std::invalid_argument("frequency vector must describe at least one entry");
}

std::vector<int> FrequencyVector::representative() const {
    std::vector<int> y;
    y.reserve(static_cast<std::size_t>(n_));
    for (int j = t(); j >= 0; --j) y.insert(y.end(), static_cast<std::size_t>(freqs_[j]), j);
    return y;
}

BigInt partition_count(long t, long n) {
    if (t < 0 || n < 0) throw std::invalid_argument("partition count needs t >= 0, N >= 0");
    // In-place form of p(s, m) = p(s, m-1) + p(s-m, m): after pass m, ways[s] = p(s, m).
    std::vector<BigInt> ways(static_cast<std::size_t>(t) + 1, 0);
    ways[0] = 1;
    for (long m = 1; m <= std::min(n, t); ++m)
        for (long s = m; s <= t; ++s) ways[s] += ways[s - m];
    return (n == 0 && t > 0) ? BigInt(0) : ways[t];
}

FrequencyVector to_frequency(std::span<const int> y) {
    long t = 0;
    for (int v : y) {
        if (v < 0) throw std::invalid_argument("entries must be non-negative");
        t += v;
    }
    std::vector<int> f(static_cast<std::size_t>(t) + 1, 0);
    for (int v : y) ++f[v];
    return FrequencyVector(std::move(f));
}

BigInt orbit_cardinality(const FrequencyVector& f) {
    return multinomial(std::vector<int>(f.freqs().begin(), f.freqs().end()));
}

namespace {

void partitions_descending(int remaining, int max_part, int slots, std::vector<int>& freqs,
                           std::vector<FrequencyVector>& out) {
    if (remaining == 0) {
        out.emplace_back(freqs);
        return;
    }
    if (slots == 0) return;
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        // The remaining slots can hold at most slots * part.
        if (static_cast<long>(part) * slots < remaining) break;
        ++freqs[part];
        --freqs[0];
        partitions_descending(remaining - part, part, slots - 1, freqs, out);
        --freqs[part];
        ++freqs[0];
    }
}

}  // namespace

std::vector<FrequencyVector> enumerate_orbits(int n, int t, std::uint64_t cap) {
    if (n < 1 || t < 0) throw std::invalid_argument("orbits need N >= 1, t >= 0");
    const BigInt count = partition_count(t, n);
    if (count > BigInt(std::to_string(cap)))
        throw EnumerationCapExceeded("F_{" + std::to_string(n) + "," + std::to_string(t) + "} has " +
                                     count.get_str() + " orbits, above the cap of " + std::to_string(cap));
    std::vector<FrequencyVector> out;
    out.reserve(count.get_ui());
    std::vector<int> freqs(static_cast<std::size_t>(t) + 1, 0);
    freqs[0] = n;
    partitions_descending(t, t, n, freqs, out);
    return out;
}

double orbit_log_weight(const FrequencyVector& f, const FamilySpec& family) {
    double w = std::lgamma(static_cast<double>(f.n()) + 1.0);
    for (int j = 0; j <= f.t(); ++j) {
        if (f[j] == 0) continue;
        const double lh = family.log_base_measure(j);
        if (lh == -std::numeric_limits<double>::infinity()) return lh;
        w += f[j] * lh - std::lgamma(static_cast<double>(f[j]) + 1.0);
    }
    return w;
}

Rational orbit_exact_weight(const FrequencyVector& f, const FamilySpec& family) {
    Rational w(orbit_cardinality(f));
    for (int j = 0; j <= f.t(); ++j) {
        if (f[j] == 0) continue;
        const Rational h = family.exact_base_measure(j);
        if (h == 0) return 0;
        BigInt num;
        BigInt den;
        mpz_pow_ui(num.get_mpz_t(), h.get_num_mpz_t(), static_cast<unsigned long>(f[j]));
        mpz_pow_ui(den.get_mpz_t(), h.get_den_mpz_t(), static_cast<unsigned long>(f[j]));
        w *= Rational(num, den);
    }
    w.canonicalize();
    return w;
}

NormalizingConstant normalizing_constant(int n, int t, const FamilySpec& family, std::uint64_t cap) {
    if (!family.has_exact_base_measure())
        throw std::logic_error("family '" + family.name() + "' has no exact base measure");
    Rational total = 0;
    for (const auto& f : enumerate_orbits(n, t, cap)) total += orbit_exact_weight(f, family);
    if (total == 0) throw std::domain_error("fiber has no point inside the family's support");
    Rational c = 1 / total;
    c.canonicalize();
    return {c, n, t};
}

Rational orbit_probability(const FrequencyVector& f, const FamilySpec& family, const NormalizingConstant& c) {
    if (f.n() != c.n || f.t() != c.t)
        throw std::invalid_argument("normalizing constant was computed for a different (N, t)");
    Rational p = orbit_exact_weight(f, family) * c.value;
    p.canonicalize();
    return p;
}

std::vector<OrbitRecord> orbit_records(int n, int t, const FamilySpec& family, std::uint64_t cap) {
    std::vector<OrbitRecord> out;
    std::optional<NormalizingConstant> c;
    if (family.has_exact_base_measure()) c = normalizing_constant(n, t, family, cap);
    for (auto& f : enumerate_orbits(n, t, cap)) {
        OrbitRecord r{f, orbit_cardinality(f), orbit_log_weight(f, family), std::nullopt};
        if (c) r.exact_probability = orbit_probability(f, family, *c);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<int> sample_within_orbit(const FrequencyVector& f, Rng& rng) {
    std::vector<int> y = f.representative();
    for (std::size_t i = y.size(); i > 1; --i) std::swap(y[i - 1], y[rng.below(i)]);
    return y;
}

}  // namespace orbitmc
