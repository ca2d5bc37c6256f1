#ifndef ERSPAR_RESISTANCE_HPP
#define ERSPAR_RESISTANCE_HPP

#include <cstdint>
#include <vector>

#include "erspar/graph.hpp"

namespace erspar {

enum class ResistanceMode { Exact, Approx };

// Per-edge effective resistances aligned with the canonical edge order.
struct ResistanceTable {
    std::vector<double> values;
    ResistanceMode mode = ResistanceMode::Exact;
    double gamma = 0.0; // multiplicative accuracy for Approx mode
};

// R_ab = (e_a - e_b)^T L^+ (e_a - e_b), from one shared pseudoinverse.
ResistanceTable effective_resistances_exact(const WeightedGraph& g);

// Same quadratic forms against a gamma-perturbed pseudoinverse; every value
// is within (1 +- gamma) of the exact one. noise_seed 0 gives exact values.
ResistanceTable effective_resistances_approx(const WeightedGraph& g, double gamma,
                                             uint64_t noise_seed);

// Sum of w_ab * R_ab minus (n - 1); zero for exact tables by Foster's theorem.
double foster_residual(const WeightedGraph& g, const ResistanceTable& r);

} // namespace erspar

#endif
