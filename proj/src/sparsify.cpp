#include "erspar/sparsify.hpp"

#include <cmath>

namespace erspar {

void SparsifyParams::validate(int n) const {
    if (k < 2 || k % 2 != 0) throw OutOfRange("sparsify: k must be a positive even integer");
    if (!(eps > 0.0 && eps < 1.0)) throw OutOfRange("sparsify: eps must be in (0,1)");
    if (!(delta > 0.0 && delta < 0.5)) throw OutOfRange("sparsify: delta must be in (0,1/2)");
    if (!(s > 0.0)) throw OutOfRange("sparsify: rate s must be positive");
    (void)n;
}

double oversampling_rate(int n, int k, double eps, double delta) {
    if (n < 2) throw OutOfRange("oversampling_rate: n must be >= 2");
    if (k < 1) throw OutOfRange("oversampling_rate: k must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw OutOfRange("oversampling_rate: eps must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw OutOfRange("oversampling_rate: delta must be in (0,1)");
    const double e = std::exp(1.0);
    return 18.0 * e * std::log(n) / (eps * eps) * std::pow(n / delta, 2.0 / k);
}

std::vector<double> sampling_probabilities(const WeightedGraph& g, const ResistanceTable& r,
                                           double s) {
    if (r.values.size() != static_cast<size_t>(g.edge_count()))
        throw LengthMismatch("sampling_probabilities: table does not match edge count");
    std::vector<double> p;
    p.reserve(r.values.size());
    for (int i = 0; i < g.edge_count(); ++i)
        p.push_back(std::min(1.0, g.edge(i).w * r.values[i] * s));
    return p;
}

ResistanceTable adjust_for_alpha(const ResistanceTable& r, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw OutOfRange("adjust_for_alpha: alpha must be in [0,1)");
    ResistanceTable out = r;
    const double scale = 1.0 / (1.0 - alpha);
    for (auto& v : out.values) v *= scale;
    return out;
}

namespace {

std::vector<double> truncated_probs(const WeightedGraph& g, const ResistanceTable& r,
                                    const SparsifyParams& params, int t_bits) {
    std::vector<double> p = sampling_probabilities(g, r, params.s);
    std::vector<double> pt = truncate_marginals(p, t_bits);
    for (size_t i = 0; i < pt.size(); ++i)
        if (pt[i] == 0.0 && p[i] > 0.0)
            throw ZeroProbabilityEdge("sparsify: probability " + std::to_string(p[i]) +
                                      " on edge " + std::to_string(i) +
                                      " truncates to zero; raise t");
    return pt;
}

} // namespace

KWiseSpace sampling_space(const WeightedGraph& g, const ResistanceTable& r,
                          const SparsifyParams& params, int t_bits) {
    params.validate(g.vertex_count());
    return KWiseSpace(truncated_probs(g, r, params, t_bits), params.k, t_bits);
}

SparsifierOutput sparsify_with_seed(const WeightedGraph& g, const ResistanceTable& r,
                                    const SparsifyParams& params, int t_bits, const Seed& seed) {
    params.validate(g.vertex_count());
    if (g.vertex_count() == 1 || g.edge_count() == 0)
        return SparsifierOutput{g, {}, {}, false}; // nothing to sparsify
    if (!is_connected(g)) throw Disconnected("sparsify: graph is disconnected");

    std::vector<double> pt = truncated_probs(g, r, params, t_bits);
    KWiseSpace space(pt, params.k, t_bits);
    std::vector<uint8_t> chosen = space.sample_at(seed);

    std::vector<Edge> kept;
    for (int i = 0; i < g.edge_count(); ++i) {
        if (!chosen[i]) continue;
        Edge e = g.edge(i);
        e.w = e.w / pt[i];
        kept.push_back(e);
    }
    SparsifierOutput out{WeightedGraph(g.vertex_count(), std::move(kept)), std::move(chosen),
                         std::move(pt), false};
    out.rate_below_theory = params.s <= 2.0 * std::exp(1.0) * std::log(g.vertex_count());
    return out;
}

SparsifierOutput sparsify_random(const WeightedGraph& g, const ResistanceTable& r,
                                 const SparsifyParams& params, int t_bits, std::mt19937_64& rng) {
    params.validate(g.vertex_count());
    if (g.vertex_count() == 1 || g.edge_count() == 0) return SparsifierOutput{g, {}, {}, false};
    KWiseSpace space = sampling_space(g, r, params, t_bits);
    Seed seed;
    seed.coeffs.resize(params.k);
    const uint64_t mask = (1ULL << space.field_log()) - 1;
    for (auto& c : seed.coeffs) c = static_cast<uint32_t>(rng() & mask);
    return sparsify_with_seed(g, r, params, t_bits, seed);
}

} // namespace erspar
