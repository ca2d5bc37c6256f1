#ifndef ERSPAR_GRAPH_HPP
#define ERSPAR_GRAPH_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "erspar/errors.hpp"
#include "erspar/linalg.hpp"

namespace erspar {

struct Edge {
    int u; // u < v
    int v;
    double w; // > 0
};

// Simple undirected graph with positive real edge weights. Edges are kept in
// canonical lexicographic (u,v) order so their position is a stable identity
// shared with sample bitvectors.
class WeightedGraph {
public:
    WeightedGraph() : n_(0) {}
    // Validates, normalizes endpoint order and sorts. Throws SelfLoop,
    // DuplicateEdge, NonPositiveWeight, IndexOutOfRange, OutOfRange.
    WeightedGraph(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int i) const { return edges_[i]; }

    double min_weight() const; // throws EmptyGraph
    double max_weight() const; // throws EmptyGraph

    bool operator==(const WeightedGraph& o) const;

private:
    int n_;
    std::vector<Edge> edges_;
};

// Edge-list text format: first line "n m"; then m lines "u v w" with 0-based
// vertex indices and a decimal weight; '#'-prefixed comment lines ignored.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph parse_edge_list(const std::string& text);
// Round-trips with parse_edge_list bit-exactly (shortest round-trip decimals).
std::string serialize_edge_list(const WeightedGraph& g);

SymMatrix laplacian(const WeightedGraph& g);
// (e_a - e_b)(e_a - e_b)^T; rank 1, trace 2.
SymMatrix edge_laplacian(int a, int b, int n);

bool is_connected(const WeightedGraph& g);

// Length of the shortest cycle, ignoring weights; nullopt for forests.
std::optional<int> girth(const WeightedGraph& g);

// Max over vertices of the sum of incident edge weights.
double max_weighted_degree(const WeightedGraph& g);

struct RoundedMultigraph {
    WeightedGraph graph; // positive integer weights floor(2^t * w)
    int shift_t;
};

// Integer-weight reduction: t = ceil(log2(2 n^3 / (delta z))) with delta = 1/6
// and z = min{1, w_min}; guarantees 2^{-t} L' approximates L within 1/6.
RoundedMultigraph round_to_multigraph(const WeightedGraph& g);

} // namespace erspar

#endif
