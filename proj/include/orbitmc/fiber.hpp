#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "orbitmc/markov_basis.hpp"
#include "orbitmc/numeric.hpp"

namespace orbitmc {

/// A non-negative data vector whose first n1 entries form group 1.
class SampleVector {
public:
    /// Throws std::invalid_argument on negative entries or n1 outside [0, size].
    SampleVector(std::vector<int> entries, int n1);

    std::span<const int> entries() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }
    int n1() const { return n1_; }
    int n2() const { return size() - n1_; }

    /// T = sum of all entries.
    long total() const;
    /// U = sum of the group-1 entries.
    long u() const;

private:
    std::vector<int> entries_;
    int n1_;
};

/// U for an arbitrary arrangement: sum of its first n1 entries.
long statistic_u(std::span<const int> y, int n1);

/// |F_{N,t}| = C(t+N-1, N-1).
BigInt fiber_cardinality(int n, long t);

/// Calls visit on every composition of t into n non-negative parts, in
/// lexicographic order. The span is only valid during the call.
void for_each_fiber_point(int n, int t, const std::function<void(std::span<const int>)>& visit);

/// All of F_{N,t} in lexicographic order. Throws EnumerationCapExceeded when
/// the fiber is larger than cap.
std::vector<std::vector<int>> enumerate_fiber(int n, int t, std::uint64_t cap = kDefaultEnumerationCap);

/// Closed-form edge count of the B_N graph over F_{N,t}; requires n >= 2, t >= 1.
BigInt fiber_edge_count(int n, int t);

struct FiberGraph {
    std::vector<std::vector<int>> vertices;
    MoveGraph graph;
    MarkovBasis basis_used;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return graph.edges.size(); }
};

FiberGraph build_fiber_graph(int n, int t, std::uint64_t cap = kDefaultEnumerationCap);

inline bool is_connected(const FiberGraph& g) { return is_connected(g.graph); }
inline bool is_bipartite(const FiberGraph& g) { return is_bipartite(g.graph); }

/// DOT-style undirected listing, vertex labels are the concatenated entries.
void write_dot(std::ostream& out, const FiberGraph& g);

}  // namespace orbitmc
