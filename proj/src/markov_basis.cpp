#include "orbitmc/markov_basis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace orbitmc {

MarkovBasis fiber_basis(int n) {
    if (n < 1) throw std::invalid_argument("fiber basis needs N >= 1");
    MarkovBasis b;
    b.kind = BasisKind::fiber;
    b.constraints = IntMatrix::Ones(1, n);
    b.moves = IntMatrix::Zero(n, n - 1);
    for (int k = 0; k < n - 1; ++k) {
        b.moves(0, k) = 1;
        b.moves(k + 1, k) = -1;
    }
    return b;
}

long orbit_basis_size(int t) {
    if (t < 1) throw std::invalid_argument("orbit basis needs t >= 1");
    const long tt = t;
    return (tt % 2 == 0) ? tt * tt / 4 : (tt * tt - 1) / 4;
}

MarkovBasis orbit_basis(int t) {
    MarkovBasis b;
    b.kind = BasisKind::orbit;
    b.constraints.resize(2, t + 1);
    for (int j = 0; j <= t; ++j) {
        b.constraints(0, j) = j;
        b.constraints(1, j) = 1;
    }
    b.moves = IntMatrix::Zero(t + 1, orbit_basis_size(t));
    Eigen::Index col = 0;
    for (int k = 2; k <= t; ++k) {
        for (int i = 1; i <= k / 2; ++i, ++col) {
            b.moves(0, col) = -1;
            b.moves(k, col) = -1;
            b.moves(i, col) = 1;
            b.moves(k - i, col) += 1;
        }
    }
    return b;
}

MarkovBasis custom_basis(IntMatrix moves, IntMatrix constraints) {
    if (moves.cols() > 0 && moves.rows() != constraints.cols())
        throw std::invalid_argument("move length does not match the constraint matrix");
    MarkovBasis b;
    b.kind = BasisKind::custom;
    b.moves = std::move(moves);
    b.constraints = std::move(constraints);
    return b;
}

bool verify_kernel(const MarkovBasis& basis) {
    if (basis.size() == 0) return true;
    if (basis.moves.rows() != basis.constraints.cols()) return false;
    for (Eigen::Index k = 0; k < basis.size(); ++k)
        if (basis.move(k).isZero()) return false;
    return (basis.constraints * basis.moves).isZero();
}

std::vector<SignedMove> admissible_moves(std::span<const int> point, const MarkovBasis& basis) {
    if (static_cast<Eigen::Index>(point.size()) != basis.dimension())
        throw std::invalid_argument("point length does not match the basis");
    const Eigen::Map<const IntVector> x(point.data(), static_cast<Eigen::Index>(point.size()));
    std::vector<SignedMove> out;
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        for (int sign : {1, -1}) {
            if (((x + sign * basis.move(k)).array() >= 0).all()) out.push_back({k, sign});
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> MoveGraph::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertex_count);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

MoveGraph move_graph(const std::vector<std::vector<int>>& points, const MarkovBasis& basis) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index.emplace(points[i], i);

    MoveGraph g;
    g.vertex_count = points.size();
    std::vector<int> y;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& x = points[i];
        if (static_cast<Eigen::Index>(x.size()) != basis.dimension())
            throw std::invalid_argument("point length does not match the basis");
        // x - m = y is the same edge as y + m = x, so the +1 direction suffices.
        for (Eigen::Index k = 0; k < basis.size(); ++k) {
            y = x;
            bool nonneg = true;
            for (std::size_t r = 0; r < y.size(); ++r) {
                y[r] += basis.moves(static_cast<Eigen::Index>(r), k);
                nonneg = nonneg && y[r] >= 0;
            }
            if (!nonneg) continue;
            auto it = index.find(y);
            if (it == index.end() || it->second == i) continue;
            g.edges.emplace_back(std::min(i, it->second), std::max(i, it->second));
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

namespace {

// BFS 2-colouring from vertex 0 of every component; colours -1 = unvisited.
std::vector<int> bfs_colouring(const MoveGraph& graph, bool& bipartite, std::size_t& components) {
    const auto adj = graph.adjacency();
    std::vector<int> colour(graph.vertex_count, -1);
    bipartite = true;
    components = 0;
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < graph.vertex_count; ++s) {
        if (colour[s] != -1) continue;
        ++components;
        colour[s] = 0;
        queue.push_back(s);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w : adj[v]) {
                if (colour[w] == -1) {
                    colour[w] = 1 - colour[v];
                    queue.push_back(w);
                } else if (colour[w] == colour[v]) {
                    bipartite = false;
                }
            }
        }
    }
    return colour;
}

}  // namespace

bool is_connected(const MoveGraph& graph) {
    bool bipartite = false;
    std::size_t components = 0;
    bfs_colouring(graph, bipartite, components);
    return components <= 1;
}

bool is_bipartite(const MoveGraph& graph) {
    bool bipartite = false;
    std::size_t components = 0;
    bfs_colouring(graph, bipartite, components);
    return bipartite;
}

bool verify_connectivity(const MarkovBasis& basis, const std::vector<std::vector<int>>& fiber_points) {
    if (fiber_points.empty()) throw std::invalid_argument("connectivity check needs at least one point");
    const auto rhs = [&](const std::vector<int>& x) -> IntVector {
        if (static_cast<Eigen::Index>(x.size()) != basis.dimension())
            throw std::invalid_argument("point length does not match the basis");
        return basis.constraints * Eigen::Map<const IntVector>(x.data(), static_cast<Eigen::Index>(x.size()));
    };
    const IntVector b = rhs(fiber_points.front());
    for (const auto& x : fiber_points)
        if (rhs(x) != b) throw std::invalid_argument("fiber points have different right-hand sides");
    return is_connected(move_graph(fiber_points, basis));
}

}  // namespace orbitmc
