#ifndef ERSPAR_SPARSIFY_HPP
#define ERSPAR_SPARSIFY_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "erspar/graph.hpp"
#include "erspar/kwise.hpp"
#include "erspar/resistance.hpp"

namespace erspar {

// Parameters of the edge-sampling sparsifier. The oversampling rate s is an
// explicit field so callers can either derive it from (n, k, eps, delta) via
// oversampling_rate() or override it for experiments. Logs are natural.
struct SparsifyParams {
    int k;        // even, positive
    double eps;   // in (0,1)
    double delta; // in (0,1/2)
    double s;     // > 0

    void validate(int n) const;
};

// s = (18 e ln n / eps^2) * (n/delta)^(2/k).
double oversampling_rate(int n, int k, double eps, double delta);

// Elementwise min{1, w_i * R_i * s}.
std::vector<double> sampling_probabilities(const WeightedGraph& g, const ResistanceTable& r,
                                           double s);

// Divides every value by (1 - alpha) so an (1 +- alpha)-approximate table
// upper-bounds the exact resistances.
ResistanceTable adjust_for_alpha(const ResistanceTable& r, double alpha);

struct SparsifierOutput {
    WeightedGraph graph;         // kept edges reweighted by w_i / probs[i]
    std::vector<uint8_t> chosen; // aligned with the input edge order
    std::vector<double> probs;   // truncated probabilities actually used
    // Set when s <= 2 e ln n, below the regime the sparsity analysis needs.
    bool rate_below_theory = false;
};

// The k-wise sample space over the truncated probabilities; the same space
// sparsify_with_seed evaluates.
KWiseSpace sampling_space(const WeightedGraph& g, const ResistanceTable& r,
                          const SparsifyParams& params, int t_bits);

// One run of the sampling sparsifier under an explicit seed. Probabilities
// are truncated to t_bits and the truncated value is used both as the
// sampling marginal and in the reweighting w / p, which keeps the
// seed-averaged Laplacian exactly equal to L. Throws ZeroProbabilityEdge when
// truncation sends a positive probability to zero (raise t_bits).
SparsifierOutput sparsify_with_seed(const WeightedGraph& g, const ResistanceTable& r,
                                    const SparsifyParams& params, int t_bits, const Seed& seed);

// Draws a uniform seed from the space and delegates to sparsify_with_seed.
SparsifierOutput sparsify_random(const WeightedGraph& g, const ResistanceTable& r,
                                 const SparsifyParams& params, int t_bits, std::mt19937_64& rng);

} // namespace erspar

#endif
