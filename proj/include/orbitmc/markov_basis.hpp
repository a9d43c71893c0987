#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace orbitmc {

using IntVector = Eigen::VectorXi;
using IntMatrix = Eigen::MatrixXi;

enum class BasisKind {
    fiber,  // B_N, serves {y in N^N : 1'y = t}
    orbit,  // B_t, serves {f in N^(t+1) : (0..t)'f = t, 1'f = N}
    custom,
};

/// A set of sign-free integer moves (one per column) and the constraint matrix
/// they annihilate. Signs are chosen where a move is applied.
struct MarkovBasis {
    BasisKind kind = BasisKind::custom;
    IntMatrix moves;
    IntMatrix constraints;

    Eigen::Index size() const { return moves.cols(); }
    Eigen::Index dimension() const { return constraints.cols(); }
    auto move(Eigen::Index k) const { return moves.col(k); }
};

/// B_N: N-1 moves, move K = e_1 - e_{K+1}.
MarkovBasis fiber_basis(int n);

/// B_t: moves m_{k,i} for 2 <= k <= t, 1 <= i <= floor(k/2), in (k, i) order.
MarkovBasis orbit_basis(int t);

/// t^2/4 for even t, (t^2-1)/4 for odd t.
long orbit_basis_size(int t);

/// Basis over arbitrary literal moves, e.g. regression fixtures.
MarkovBasis custom_basis(IntMatrix moves, IntMatrix constraints);

/// constraints * m == 0 for every move, and no move is zero.
bool verify_kernel(const MarkovBasis& basis);

struct SignedMove {
    Eigen::Index index;
    int sign;

    friend bool operator==(const SignedMove&, const SignedMove&) = default;
};

/// All (m, eps) with point + eps*m >= 0, ordered by move index then sign (+1 first).
std::vector<SignedMove> admissible_moves(std::span<const int> point, const MarkovBasis& basis);

/// Undirected simple graph over a point list.
struct MoveGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (i, j) with i < j, deduplicated

    std::vector<std::vector<std::size_t>> adjacency() const;
};

/// Edge {x, y} whenever y = x + m or y = x - m for some basis move; only points
/// present in the list are linked.
MoveGraph move_graph(const std::vector<std::vector<int>>& points, const MarkovBasis& basis);

bool is_connected(const MoveGraph& graph);
bool is_bipartite(const MoveGraph& graph);

/// True iff the move graph over fiber_points is connected. Throws
/// std::invalid_argument on an empty list or when the points do not share
/// the same right-hand side constraints * x.
bool verify_connectivity(const MarkovBasis& basis, const std::vector<std::vector<int>>& fiber_points);

}  // namespace orbitmc
