#ifndef ERSPAR_DERAND_HPP
#define ERSPAR_DERAND_HPP

#include <cstdint>
#include <vector>

#include "erspar/graph.hpp"
#include "erspar/resistance.hpp"
#include "erspar/verify.hpp"

namespace erspar {

struct DerandConfig {
    int k;      // even, positive
    double eps; // in (0,1)
    uint64_t enumeration_cap = 1ULL << 24;
    int parallel_width = 1;
    // Seed of the perturbed pseudoinverse oracle standing in for the
    // approximate solver; 0 selects the exact oracle. Part of the input, so
    // the pipeline stays deterministic.
    uint64_t noise_seed = 0;
};

// Constants fixed by the deterministic pipeline: delta = 1/4, eps_hat =
// 4 eps / 5, alpha = 1/(2 d_max), alpha' = alpha/(4+alpha), the rate s at
// eps_hat, the truncation precision t = ceil(log2(1/alpha')) and the explicit
// acceptance threshold ceil(12 s (n-1)).
struct DerivedConstants {
    double delta;
    double eps_hat;
    double alpha;
    double alpha_prime;
    double s;
    int t_bits;
    uint64_t edge_threshold;
};

DerivedConstants derived_constants(const WeightedGraph& g, const DerandConfig& config);

// p~ = 2^-t floor(2^t min{1, w R~ s / (1 - alpha')}), the dyadic-grid version
// of the alpha'-quantum truncation. R~ must be an (1 +- alpha')-approximate
// table.
std::vector<double> truncated_probabilities(const WeightedGraph& g, const ResistanceTable& r,
                                            double s, double alpha_prime);

struct CandidateReport {
    uint64_t seed_index = 0;
    uint64_t edge_count = 0;
    Verdict verdict = Verdict::NO;
    bool accepted = false;
};

struct DerandResult {
    WeightedGraph graph;
    CandidateReport report;
    DerivedConstants constants;
};

// Thrown when the enumeration cap (or the whole space) is exhausted without
// an acceptance; carries the best candidate seen.
struct ExhaustedSeeds : Error {
    ExhaustedSeeds(const std::string& msg, CandidateReport best_seen, uint64_t tried)
        : Error(msg), best(best_seen), seeds_tried(tried) {}
    CandidateReport best;
    uint64_t seeds_tried;
};

struct EnumeratedCandidate {
    WeightedGraph graph;
    CandidateReport report;
};

// The enumeration engine: walks the k-wise seed space over the given
// marginals in ascending index order and returns the first candidate with at
// most edge_threshold edges and a YES from the verifier at (eps_hat, alpha =
// 9/16). Workers preserve lowest-index-wins, so the result is independent of
// scheduling. Throws ExhaustedSeeds when cap (or the space) runs out.
EnumeratedCandidate enumerate_candidates(const WeightedGraph& g,
                                         const std::vector<double>& probs, int k, int t_bits,
                                         double eps_hat, uint64_t edge_threshold, uint64_t cap,
                                         int jobs, uint64_t noise_seed);

// Deterministic pipeline: fixes the constants above, builds truncated
// probabilities from alpha'-approximate resistances, enumerates the k-wise
// seed space in ascending order and returns the first candidate whose edge
// count is within the threshold and whose verifier call (eps_hat, alpha =
// 9/16) answers YES. The accepted Laplacian then approximates L within
// eps_hat * sqrt(25/16) = eps.
DerandResult derandomized_sparsify(const WeightedGraph& g, const DerandConfig& config);

} // namespace erspar

#endif
