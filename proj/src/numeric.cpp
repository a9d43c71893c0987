#include "orbitmc/numeric.hpp"

#include <cmath>

namespace orbitmc {

BigInt binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt multinomial(const std::vector<int>& counts) {
    // Product of binomials avoids the full n! / prod k! division.
    BigInt r = 1;
    long running = 0;
    for (int c : counts) {
        if (c < 0) return 0;
        running += c;
        r *= binomial(running, c);
    }
    return r;
}

std::vector<double> log_factorial_table(int max_n) {
    std::vector<double> table(static_cast<std::size_t>(std::max(max_n, 0)) + 1);
    for (int i = 0; i <= max_n; ++i) table[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return table;
}

double to_double(const Rational& q) { return q.get_d(); }
double to_double(const BigInt& z) { return z.get_d(); }

std::string to_string(const Rational& q) {
    Rational r = q;
    r.canonicalize();
    return r.get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

}  // namespace orbitmc
