#include "doctest.h"

#include <algorithm>
#include <set>

#include "orbitmc/fiber.hpp"
#include "orbitmc/markov_basis.hpp"
#include "orbitmc/orbit.hpp"

using namespace orbitmc;

namespace {

std::vector<int> column(const MarkovBasis& b, Eigen::Index k) {
    std::vector<int> v(static_cast<std::size_t>(b.moves.rows()));
    for (Eigen::Index r = 0; r < b.moves.rows(); ++r) v[static_cast<std::size_t>(r)] = b.moves(r, k);
    return v;
}

std::set<std::vector<int>> column_set(const MarkovBasis& b) {
    std::set<std::vector<int>> s;
    for (Eigen::Index k = 0; k < b.size(); ++k) s.insert(column(b, k));
    return s;
}

std::vector<std::vector<int>> orbit_points(int n, int t) {
    std::vector<std::vector<int>> pts;
    for (const auto& f : enumerate_orbits(n, t)) pts.emplace_back(f.freqs().begin(), f.freqs().end());
    return pts;
}

IntMatrix literal_moves(const std::vector<std::vector<int>>& cols) {
    IntMatrix m(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < cols[c].size(); ++r)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
    return m;
}

// The nine columns printed for B_6, rows indexed 0..6.
const std::vector<std::vector<int>> kB6 = {
    {-1, 2, -1, 0, 0, 0, 0}, {-1, 1, 1, -1, 0, 0, 0}, {-1, 1, 0, 1, -1, 0, 0},
    {-1, 0, 2, 0, -1, 0, 0}, {-1, 1, 0, 0, 1, -1, 0}, {-1, 0, 1, 1, 0, -1, 0},
    {-1, 1, 0, 0, 0, 1, -1}, {-1, 0, 1, 0, 1, 0, -1}, {-1, 0, 0, 2, 0, 0, -1},
};

// Moves a general-purpose solver adds for t = 6 that involve no f_0 entry.
const std::vector<std::vector<int>> kExtraMoves = {
    {0, 0, 0, 0, 1, -2, 1}, {0, 0, 0, 1, -1, -1, 1}, {0, 0, 1, -1, 0, -1, 1},
    {0, 0, 1, 0, -2, 0, 1}, {0, 1, -1, 0, 0, -1, 1}, {0, 1, 0, -1, -1, 0, 1},
};

}  // namespace

TEST_CASE("fiber basis") {
    const auto b3 = fiber_basis(3);
    CHECK(b3.size() == 2);
    CHECK(column(b3, 0) == std::vector<int>{1, -1, 0});
    CHECK(column(b3, 1) == std::vector<int>{1, 0, -1});
    CHECK(fiber_basis(1).size() == 0);
    const auto b5 = fiber_basis(5);
    CHECK(b5.size() == 4);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(b5.move(k).sum() == 0);
    for (int n = 1; n <= 50; ++n) CHECK(verify_kernel(fiber_basis(n)));
}

TEST_CASE("orbit basis") {
    const auto b2 = orbit_basis(2);
    REQUIRE(b2.size() == 1);
    CHECK(column(b2, 0) == std::vector<int>{-1, 2, -1});
    CHECK(orbit_basis(1).size() == 0);
    CHECK(column_set(orbit_basis(6)) == std::set<std::vector<int>>(kB6.begin(), kB6.end()));
    CHECK(orbit_basis_size(6) == 9);
    CHECK(orbit_basis_size(1) == 0);
    CHECK(orbit_basis_size(7) == 12);
    for (int t = 1; t <= 30; ++t) {
        long sum = 0;
        for (int k = 2; k <= t; ++k) sum += k / 2;
        CHECK(orbit_basis_size(t) == sum);
        CHECK(orbit_basis(t).size() == orbit_basis_size(t));
    }
    for (int t = 1; t <= 50; ++t) {
        const auto b = orbit_basis(t);
        CHECK(verify_kernel(b));
        for (Eigen::Index k = 0; k < b.size(); ++k)
            for (Eigen::Index r = 0; r < b.moves.rows(); ++r) {
                const int v = b.moves(r, k);
                CHECK((v >= -1 && v <= 2));
                if (v == 2) {
                    // a 2 only at k/2 for the move's own k: the (single) -1 outside index 0
                    Eigen::Index kk = 0;
                    for (Eigen::Index q = 1; q < b.moves.rows(); ++q)
                        if (b.moves(q, k) == -1) kk = q;
                    CHECK(2 * r == kk);
                }
            }
    }
}

TEST_CASE("orbit basis emission order is (k, i)") {
    const auto b = orbit_basis(5);
    std::vector<std::pair<int, int>> ki;
    for (Eigen::Index c = 0; c < b.size(); ++c) {
        int k = 0, i = 0;
        for (Eigen::Index r = b.moves.rows() - 1; r >= 1; --r)
            if (b.moves(r, c) == -1) k = static_cast<int>(r);
        for (Eigen::Index r = 1; r < b.moves.rows(); ++r)
            if (b.moves(r, c) > 0) {
                i = static_cast<int>(r);
                break;
            }
        ki.emplace_back(k, i);
    }
    CHECK(std::is_sorted(ki.begin(), ki.end()));
}

TEST_CASE("kernel check rejects a corrupted move") {
    MarkovBasis bad = orbit_basis(2);
    bad.moves(1, 0) = 2;
    bad.moves(2, 0) = 0;  // (-1, 2, 0)
    CHECK_FALSE(verify_kernel(bad));
    CHECK(verify_kernel(fiber_basis(4)));
}

TEST_CASE("admissible moves") {
    const auto b3 = fiber_basis(3);
    const std::vector<int> corner{6, 0, 0};
    CHECK(admissible_moves(corner, b3) == std::vector<SignedMove>{{0, -1}, {1, -1}});
    const std::vector<int> inner{2, 2, 2};
    CHECK(admissible_moves(inner, b3).size() == 4);
    const std::vector<int> zero{0, 0, 0};
    CHECK(admissible_moves(zero, orbit_basis(2)).empty());
}

TEST_CASE("connectivity") {
    CHECK(verify_connectivity(orbit_basis(6), orbit_points(3, 6)));
    CHECK(verify_connectivity(fiber_basis(3), {{1, 2, 3}}));
    for (int n = 2; n <= 5; ++n)
        for (int t = 1; t <= 10; ++t) {
            CAPTURE(n);
            CAPTURE(t);
            CHECK(verify_connectivity(orbit_basis(t), orbit_points(n, t)));
        }
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t <= 8; ++t) {
            CHECK(verify_connectivity(fiber_basis(n), enumerate_fiber(n, t)));
            if (t >= 1) CHECK(verify_connectivity(orbit_basis(t), orbit_points(n, t)));
        }
    CHECK_THROWS_AS(verify_connectivity(fiber_basis(2), {}), std::invalid_argument);
    CHECK_THROWS_AS(verify_connectivity(fiber_basis(2), {{1, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("the extra solver moves are never admissible on the t = 6 orbits") {
    const auto extra = custom_basis(literal_moves(kExtraMoves), orbit_basis(6).constraints);
    REQUIRE(extra.size() == 6);
    CHECK(verify_kernel(extra));
    for (const auto& p : orbit_points(3, 6)) CHECK(admissible_moves(p, extra).empty());
}
