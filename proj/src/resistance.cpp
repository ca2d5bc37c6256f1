#include "erspar/resistance.hpp"

#include "erspar/linalg.hpp"

namespace erspar {

namespace {

std::vector<double> quadratic_forms(const WeightedGraph& g, const SymMatrix& pinv) {
    std::vector<double> r;
    r.reserve(g.edge_count());
    for (const auto& e : g.edges())
        r.push_back(pinv(e.u, e.u) + pinv(e.v, e.v) - 2.0 * pinv(e.u, e.v));
    return r;
}

} // namespace

ResistanceTable effective_resistances_exact(const WeightedGraph& g) {
    if (!is_connected(g)) throw Disconnected("effective_resistances_exact: graph is disconnected");
    SymMatrix pinv = pseudoinverse(laplacian(g));
    return ResistanceTable{quadratic_forms(g, pinv), ResistanceMode::Exact, 0.0};
}

ResistanceTable effective_resistances_approx(const WeightedGraph& g, double gamma,
                                             uint64_t noise_seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw OutOfRange("effective_resistances_approx: gamma must be in (0,1)");
    if (!is_connected(g)) throw Disconnected("effective_resistances_approx: graph is disconnected");
    SymMatrix pinv = perturbed_pseudoinverse(laplacian(g), gamma, noise_seed);
    return ResistanceTable{quadratic_forms(g, pinv), ResistanceMode::Approx, gamma};
}

double foster_residual(const WeightedGraph& g, const ResistanceTable& r) {
    if (r.values.size() != static_cast<size_t>(g.edge_count()))
        throw LengthMismatch("foster_residual: table does not match edge count");
    double sum = 0.0;
    for (int i = 0; i < g.edge_count(); ++i) sum += g.edge(i).w * r.values[i];
    return sum - (g.vertex_count() - 1);
}

} // namespace erspar
