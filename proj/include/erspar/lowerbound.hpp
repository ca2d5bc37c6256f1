#ifndef ERSPAR_LOWERBOUND_HPP
#define ERSPAR_LOWERBOUND_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "erspar/graph.hpp"

namespace erspar {

// Exact dyadic rational num / 2^log2_den, kept in lowest terms.
struct Dyadic {
    uint64_t num = 0;
    int log2_den = 0;

    Dyadic() = default;
    Dyadic(uint64_t n, int e) : num(n), log2_den(e) { reduce(); }
    void reduce() {
        while (log2_den > 0 && num != 0 && (num & 1) == 0) {
            num >>= 1;
            --log2_den;
        }
        if (num == 0) log2_den = 0;
    }
    double value() const { return static_cast<double>(num) / std::ldexp(1.0, log2_den); }
    bool operator==(const Dyadic& o) const { return num == o.num && log2_den == o.log2_den; }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
};

// Keep an edge iff its endpoints land on the same side of a uniform vertex
// partition. Exactly (girth-1)-wise independent with marginals 1/2.
std::vector<uint8_t> partition_sample(const WeightedGraph& g,
                                      const std::vector<uint8_t>& partition);

// The 3-wise distribution with marginals 1/4 on the complete graph: V0 edges
// by fair coins, V1 edges from a uniform complete-bipartite sample, crossing
// edges never. `coins` supplies one bit per V0-internal pair in canonical
// edge order; `inner_partition` is read only at V1 positions.
std::vector<uint8_t> three_wise_complete_sample(int n, const std::vector<uint8_t>& partition,
                                                const std::vector<uint8_t>& coins,
                                                const std::vector<uint8_t>& inner_partition);

enum class DistKind { Partition, ThreeWiseComplete };

struct Distribution {
    DistKind kind;
    WeightedGraph graph; // complete graph for ThreeWiseComplete

    static Distribution partition(const WeightedGraph& g) {
        return Distribution{DistKind::Partition, g};
    }
    static Distribution three_wise_complete(int n);
};

// Exact joint law of the given edge subset by exhaustive enumeration of the
// randomness space. Key = bit pattern of the subset (bit b = edge_subset[b]).
std::map<uint32_t, Dyadic> exact_joint_distribution(const Distribution& dist,
                                                    const std::vector<int>& edge_subset);

// Largest k such that every edge subset of size <= k satisfies the exact
// product law; girth(G) - 1 for the partition distribution.
int independence_order(const Distribution& dist);

// Exact probability that the sampled edge set leaves the n vertices
// disconnected (isolated vertices count).
Dyadic disconnection_probability(const Distribution& dist);

// n >= 2 ((d-1)^(g/2) - 1) / (d-2); even-girth form only.
bool moore_bound_check(long long n, long long d, long long g);

WeightedGraph complete_graph(int n);
WeightedGraph cycle_graph(int n);
WeightedGraph petersen_graph(); // (3,5)-cage: 10 vertices, 15 edges
WeightedGraph heawood_graph();  // (3,6)-cage: 14 vertices, 21 edges

// K_3..K_12, C_3..C_12, petersen, heawood.
std::map<std::string, WeightedGraph> fixtures();

} // namespace erspar

#endif
