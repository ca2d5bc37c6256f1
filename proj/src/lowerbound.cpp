#include "erspar/lowerbound.hpp"

#include <algorithm>
#include <numeric>

namespace erspar {

std::vector<uint8_t> partition_sample(const WeightedGraph& g,
                                      const std::vector<uint8_t>& partition) {
    if (partition.size() != static_cast<size_t>(g.vertex_count()))
        throw LengthMismatch("partition_sample: partition length != vertex count");
    std::vector<uint8_t> bits(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        bits[i] = (partition[e.u] & 1) == (partition[e.v] & 1) ? 1 : 0;
    }
    return bits;
}

std::vector<uint8_t> three_wise_complete_sample(int n, const std::vector<uint8_t>& partition,
                                                const std::vector<uint8_t>& coins,
                                                const std::vector<uint8_t>& inner_partition) {
    if (n < 1) throw OutOfRange("three_wise_complete_sample: n must be positive");
    if (partition.size() != static_cast<size_t>(n) ||
        inner_partition.size() != static_cast<size_t>(n))
        throw LengthMismatch("three_wise_complete_sample: partition length != n");
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    size_t coin_pos = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const bool u1 = partition[u] & 1, v1 = partition[v] & 1;
            uint8_t keep = 0;
            if (!u1 && !v1) {
                if (coin_pos >= coins.size())
                    throw InsufficientCoins("three_wise_complete_sample: coin stream too short");
                keep = coins[coin_pos++] & 1;
            } else if (u1 && v1) {
                keep = (inner_partition[u] & 1) != (inner_partition[v] & 1) ? 1 : 0;
            }
            bits.push_back(keep);
        }
    }
    return bits;
}

Distribution Distribution::three_wise_complete(int n) {
    return Distribution{DistKind::ThreeWiseComplete, complete_graph(n)};
}

namespace {

// Enumerates the full randomness space of a distribution, invoking
// fn(edge_bits, neg_log2_prob) once per outcome. neg_log2_prob is constant
// for the partition distribution and varies with the split for the 3-wise
// one.
template <typename F>
void enumerate_outcomes(const Distribution& dist, F&& fn) {
    const WeightedGraph& g = dist.graph;
    const int n = g.vertex_count();
    if (dist.kind == DistKind::Partition) {
        if (n > 24) throw TooLarge("partition enumeration capped at n = 24");
        std::vector<uint8_t> partition(n);
        for (uint32_t p = 0; p < (1u << n); ++p) {
            for (int i = 0; i < n; ++i) partition[i] = (p >> i) & 1;
            fn(partition_sample(g, partition), n);
        }
        return;
    }

    // Outcome budget: sum over splits of 2^(C(|V0|,2) + |V1|).
    double total = 0.0;
    for (uint32_t p = 0; p < (1u << n); ++p) {
        const int n0 = n - __builtin_popcount(p);
        total += std::ldexp(1.0, n0 * (n0 - 1) / 2 + (n - n0));
        if (total > (1 << 26)) throw TooLarge("three-wise enumeration above 2^26 outcomes");
    }

    std::vector<uint8_t> partition(n), coins, inner(n);
    for (uint32_t p = 0; p < (1u << n); ++p) {
        int e0 = 0, v1 = 0;
        for (int i = 0; i < n; ++i) partition[i] = (p >> i) & 1;
        for (int i = 0; i < n; ++i) v1 += partition[i];
        const int n0 = n - v1;
        e0 = n0 * (n0 - 1) / 2;
        const int neg_log2 = n + e0 + v1;
        coins.assign(e0, 0);
        for (uint32_t c = 0; c < (1u << e0); ++c) {
            for (int i = 0; i < e0; ++i) coins[i] = (c >> i) & 1;
            for (uint32_t q = 0; q < (1u << v1); ++q) {
                int pos = 0;
                for (int i = 0; i < n; ++i)
                    if (partition[i]) inner[i] = (q >> pos++) & 1;
                fn(three_wise_complete_sample(n, partition, coins, inner), neg_log2);
            }
        }
    }
}

double edge_marginal(const Distribution& dist) {
    return dist.kind == DistKind::Partition ? 0.5 : 0.25;
}

} // namespace

std::map<uint32_t, Dyadic> exact_joint_distribution(const Distribution& dist,
                                                    const std::vector<int>& edge_subset) {
    const int j = static_cast<int>(edge_subset.size());
    if (j < 1 || j > 26) throw OutOfRange("exact_joint_distribution: subset size out of range");
    for (int e : edge_subset)
        if (e < 0 || e >= dist.graph.edge_count())
            throw IndexOutOfRange("exact_joint_distribution: edge index out of range");

    // Aggregate exact counts against a common power-of-two denominator.
    std::vector<uint64_t> counts(1u << j, 0);
    int denom_log2 = 0;
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>& bits, int neg_log2) {
        denom_log2 = std::max(denom_log2, neg_log2);
        (void)bits;
    });
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>& bits, int neg_log2) {
        uint32_t pattern = 0;
        for (int b = 0; b < j; ++b) pattern |= static_cast<uint32_t>(bits[edge_subset[b]]) << b;
        counts[pattern] += 1ULL << (denom_log2 - neg_log2);
    });

    std::map<uint32_t, Dyadic> out;
    for (uint32_t pattern = 0; pattern < (1u << j); ++pattern)
        out[pattern] = Dyadic(counts[pattern], denom_log2);
    return out;
}

namespace {

// One enumerated outcome: sampled edges as a bitmask plus the weight
// 2^(denom_log2 - neg_log2_prob) it carries under the common denominator.
struct MaskedOutcome {
    uint64_t mask;
    uint64_t weight;
};

struct OutcomeCache {
    std::vector<MaskedOutcome> outcomes;
    int denom_log2 = 0;
};

OutcomeCache cache_outcomes(const Distribution& dist) {
    if (dist.graph.edge_count() > 64)
        throw TooLarge("enumeration needs at most 64 edges for cached masks");
    OutcomeCache cache;
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>&, int neg_log2) {
        cache.denom_log2 = std::max(cache.denom_log2, neg_log2);
    });
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>& bits, int neg_log2) {
        uint64_t mask = 0;
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) mask |= 1ULL << i;
        cache.outcomes.push_back({mask, 1ULL << (cache.denom_log2 - neg_log2)});
    });
    return cache;
}

// Product-law check for one subset. For the partition distribution only the
// involved vertices matter, so the enumeration marginalizes to them (an exact
// reduction; the remaining vertices contribute a uniform factor to both
// sides). Other distributions run over the cached global enumeration.
bool subset_is_product(const Distribution& dist, const OutcomeCache* cache,
                       const std::vector<int>& subset) {
    const WeightedGraph& g = dist.graph;
    const int j = static_cast<int>(subset.size());

    if (dist.kind == DistKind::Partition) {
        std::vector<int> verts;
        for (int e : subset) {
            verts.push_back(g.edge(e).u);
            verts.push_back(g.edge(e).v);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        const int w = static_cast<int>(verts.size());
        std::vector<int> vpos(g.vertex_count(), -1);
        for (int i = 0; i < w; ++i) vpos[verts[i]] = i;

        std::vector<uint64_t> counts(1u << j, 0);
        for (uint32_t a = 0; a < (1u << w); ++a) {
            uint32_t pattern = 0;
            for (int b = 0; b < j; ++b) {
                const Edge& e = g.edge(subset[b]);
                const uint32_t bu = (a >> vpos[e.u]) & 1, bv = (a >> vpos[e.v]) & 1;
                pattern |= static_cast<uint32_t>(bu == bv) << b;
            }
            ++counts[pattern];
        }
        // Marginals are exactly 1/2: pattern probability must be 2^-j, i.e.
        // count * 2^j == 2^w for every pattern.
        for (uint64_t c : counts)
            if (c << j != 1ULL << w) return false;
        return true;
    }

    std::vector<uint64_t> weights(1u << j, 0);
    for (const MaskedOutcome& o : cache->outcomes) {
        uint32_t pattern = 0;
        for (int b = 0; b < j; ++b) pattern |= ((o.mask >> subset[b]) & 1ULL) << b;
        weights[pattern] += o.weight;
    }
    for (uint32_t pattern = 0; pattern < (1u << j); ++pattern) {
        // Product of marginals 1/4: numerator 3^(#zeros), denominator 4^j.
        uint64_t num = 1;
        for (int b = 0; b < j; ++b)
            if (!((pattern >> b) & 1)) num *= 3;
        if (Dyadic(weights[pattern], cache->denom_log2) != Dyadic(num, 2 * j)) return false;
    }
    return true;
}

} // namespace

int independence_order(const Distribution& dist) {
    const int m = dist.graph.edge_count();
    if (m < 1) throw EmptyGraph("independence_order: graph has no edges");
    OutcomeCache cache;
    if (dist.kind != DistKind::Partition) cache = cache_outcomes(dist);
    double budget = 0.0;
    std::vector<int> comb;
    for (int j = 1; j <= m; ++j) {
        // Subsets of size j in combination order; first failure ends the scan.
        double count = 1.0;
        for (int i = 0; i < j; ++i) count = count * (m - i) / (i + 1);
        budget += count;
        if (budget > static_cast<double>(1 << 24))
            throw TooLarge("independence_order: subset enumeration above 2^24");
        comb.resize(j);
        std::iota(comb.begin(), comb.end(), 0);
        while (true) {
            if (!subset_is_product(dist, &cache, comb)) return j - 1;
            int i = j - 1;
            while (i >= 0 && comb[i] == m - j + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int b = i + 1; b < j; ++b) comb[b] = comb[b - 1] + 1;
        }
    }
    return m;
}

Dyadic disconnection_probability(const Distribution& dist) {
    const int n = dist.graph.vertex_count();
    if (n < 2) return Dyadic(0, 0);
    uint64_t bad = 0;
    int denom_log2 = 0;
    std::vector<int> parent(n);
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>&, int neg_log2) {
        denom_log2 = std::max(denom_log2, neg_log2);
    });
    enumerate_outcomes(dist, [&](const std::vector<uint8_t>& bits, int neg_log2) {
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int components = n;
        for (int i = 0; i < dist.graph.edge_count(); ++i) {
            if (!bits[i]) continue;
            const int ru = find(dist.graph.edge(i).u), rv = find(dist.graph.edge(i).v);
            if (ru != rv) {
                parent[ru] = rv;
                --components;
            }
        }
        if (components > 1) bad += 1ULL << (denom_log2 - neg_log2);
    });
    return Dyadic(bad, denom_log2);
}

bool moore_bound_check(long long n, long long d, long long g) {
    if (d < 3) throw OutOfRange("moore_bound_check: d must be >= 3");
    if (g < 2 || g % 2 != 0) throw OutOfRange("moore_bound_check: even girth form only");
    // 2 ((d-1)^(g/2) - 1) / (d-2), exactly; saturates far above any vertex count.
    unsigned __int128 pow = 1;
    const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 100;
    for (long long i = 0; i < g / 2; ++i) {
        pow *= static_cast<unsigned __int128>(d - 1);
        if (pow > cap) return false;
    }
    const unsigned __int128 bound = 2 * (pow - 1) / static_cast<unsigned __int128>(d - 2);
    return static_cast<unsigned __int128>(n) >= bound;
}

WeightedGraph complete_graph(int n) {
    if (n < 1) throw OutOfRange("complete_graph: n must be positive");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph cycle_graph(int n) {
    if (n < 3) throw OutOfRange("cycle_graph: n must be >= 3");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, 1.0});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph petersen_graph() {
    // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5, 1.0});
        edges.push_back({i, i + 5, 1.0});
        edges.push_back({5 + i, 5 + (i + 2) % 5, 1.0});
    }
    return WeightedGraph(10, std::move(edges));
}

WeightedGraph heawood_graph() {
    // 14-cycle plus LCF [5,-5]^7 chords.
    std::vector<Edge> edges;
    for (int i = 0; i < 14; ++i) edges.push_back({i, (i + 1) % 14, 1.0});
    for (int i = 0; i < 14; i += 2) edges.push_back({i, (i + 5) % 14, 1.0});
    return WeightedGraph(14, std::move(edges));
}

std::map<std::string, WeightedGraph> fixtures() {
    std::map<std::string, WeightedGraph> out;
    for (int n = 3; n <= 12; ++n) {
        out.emplace("K" + std::to_string(n), complete_graph(n));
        out.emplace("C" + std::to_string(n), cycle_graph(n));
    }
    out.emplace("petersen", petersen_graph());
    out.emplace("heawood", heawood_graph());
    return out;
}

} // namespace erspar
