#include "orbitmc/fiber.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace orbitmc {

SampleVector::SampleVector(std::vector<int> entries, int n1) : entries_(std::move(entries)), n1_(n1) {
    if (entries_.empty()) throw std::invalid_argument("sample vector must not be empty");
    if (n1_ < 0 || n1_ > size()) throw std::invalid_argument("group-1 size outside [0, N]");
    for (int y : entries_)
        if (y < 0) throw std::invalid_argument("sample entries must be non-negative");
}

long SampleVector::total() const { return std::accumulate(entries_.begin(), entries_.end(), 0L); }

long SampleVector::u() const { return statistic_u(entries_, n1_); }

long statistic_u(std::span<const int> y, int n1) {
    return std::accumulate(y.begin(), y.begin() + n1, 0L);
}

BigInt fiber_cardinality(int n, long t) {
    if (n < 1 || t < 0) throw std::invalid_argument("fiber cardinality needs N >= 1, t >= 0");
    return binomial(t + n - 1, n - 1);
}

void for_each_fiber_point(int n, int t, const std::function<void(std::span<const int>)>& visit) {
    if (n < 1 || t < 0) throw std::invalid_argument("fiber needs N >= 1, t >= 0");
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    y.back() = t;
    for (;;) {
        visit(y);
        // Lexicographic successor: bump the rightmost position that still has
        // mass to its right, and push the rest of that mass to the last slot.
        int i = n - 2;
        int tail = y[n - 1];
        while (i >= 0 && tail == 0) {
            tail += y[i];
            --i;
        }
        if (i < 0) return;
        ++y[i];
        for (int j = i + 1; j < n - 1; ++j) y[j] = 0;
        y[n - 1] = tail - 1;
    }
}

std::vector<std::vector<int>> enumerate_fiber(int n, int t, std::uint64_t cap) {
    const BigInt size = fiber_cardinality(n, t);
    if (size > BigInt(std::to_string(cap)))
        throw EnumerationCapExceeded("fiber F_{" + std::to_string(n) + "," + std::to_string(t) + "} has " +
                                     size.get_str() + " points, above the cap of " + std::to_string(cap));
    std::vector<std::vector<int>> out;
    out.reserve(size.get_ui());
    for_each_fiber_point(n, t, [&](std::span<const int> y) { out.emplace_back(y.begin(), y.end()); });
    return out;
}

BigInt fiber_edge_count(int n, int t) {
    if (n < 2 || t < 1) throw std::invalid_argument("edge count needs N >= 2, t >= 1");
    // Twice the edge count: degree sum over the three vertex classes
    // (no zeros; y_1 > 0 with z zeros; y_1 = 0 with z zeros in total).
    BigInt twice = 2 * BigInt(n - 1) * binomial(t - 1, n - 1);
    for (int z = 1; z <= n - 1; ++z) {
        twice += BigInt(2 * n - 2 - z) * binomial(t - 1, n - 1 - z) * binomial(n - 1, z);
        twice += BigInt(n - z) * binomial(t - 1, n - 1 - z) * binomial(n - 1, z - 1);
    }
    return twice / 2;
}

FiberGraph build_fiber_graph(int n, int t, std::uint64_t cap) {
    FiberGraph g;
    g.vertices = enumerate_fiber(n, t, cap);
    g.basis_used = fiber_basis(n);
    g.graph = move_graph(g.vertices, g.basis_used);
    return g;
}

void write_dot(std::ostream& out, const FiberGraph& g) {
    const auto label = [&](std::size_t v) {
        std::string s;
        for (std::size_t i = 0; i < g.vertices[v].size(); ++i) {
            if (i) s += ',';
            s += std::to_string(g.vertices[v][i]);
        }
        return s;
    };
    out << "graph fiber {\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) out << "  v" << v << " [label=\"" << label(v) << "\"];\n";
    for (const auto& [a, b] : g.graph.edges) out << "  v" << a << " -- v" << b << ";\n";
    out << "}\n";
}

}  // namespace orbitmc
