#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace orbitmc {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Default bound on the number of objects an exhaustive enumeration may produce.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

class EnumerationCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Binomial coefficient with the conventions C(n,k) = 0 for k < 0, k > n or n < 0.
BigInt binomial(long n, long k);

BigInt factorial(unsigned long n);

/// n! / (k_0! k_1! ...), with n = sum of the counts.
BigInt multinomial(const std::vector<int>& counts);

/// log(n!) for n in [0, max_n].
std::vector<double> log_factorial_table(int max_n);

double to_double(const Rational& q);
double to_double(const BigInt& z);

/// "p/q" (reduced), or "p" when q = 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

}  // namespace orbitmc
