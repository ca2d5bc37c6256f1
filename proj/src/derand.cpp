#include "erspar/derand.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "erspar/kwise.hpp"
#include "erspar/sparsify.hpp"

namespace erspar {

DerivedConstants derived_constants(const WeightedGraph& g, const DerandConfig& config) {
    if (config.k < 2 || config.k % 2 != 0)
        throw OutOfRange("derand: k must be a positive even integer");
    if (!(config.eps > 0.0 && config.eps < 1.0)) throw OutOfRange("derand: eps must be in (0,1)");
    if (config.enumeration_cap < 1) throw OutOfRange("derand: enumeration cap must be >= 1");
    if (g.edge_count() == 0) throw EmptyGraph("derand: graph has no edges");
    if (!is_connected(g)) throw Disconnected("derand: graph is disconnected");

    DerivedConstants c;
    c.delta = 0.25;
    c.eps_hat = 4.0 * config.eps / 5.0;
    c.alpha = 1.0 / (2.0 * max_weighted_degree(g));
    c.alpha_prime = c.alpha / (4.0 + c.alpha);
    c.s = oversampling_rate(g.vertex_count(), config.k, c.eps_hat, c.delta);
    c.t_bits = static_cast<int>(std::ceil(std::log2(1.0 / c.alpha_prime)));
    if (c.t_bits < 1) c.t_bits = 1;
    const double thr = std::ceil(12.0 * c.s * (g.vertex_count() - 1));
    c.edge_threshold = thr >= 1e19 ? ~0ULL : static_cast<uint64_t>(thr);
    return c;
}

std::vector<double> truncated_probabilities(const WeightedGraph& g, const ResistanceTable& r,
                                            double s, double alpha_prime) {
    if (r.values.size() != static_cast<size_t>(g.edge_count()))
        throw LengthMismatch("truncated_probabilities: table does not match edge count");
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw OutOfRange("truncated_probabilities: alpha' must be in (0,1)");
    const int t = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / alpha_prime))));
    const double scale = std::ldexp(1.0, t);
    std::vector<double> out;
    out.reserve(r.values.size());
    for (int i = 0; i < g.edge_count(); ++i) {
        const double p = std::min(1.0, g.edge(i).w * r.values[i] * s / (1.0 - alpha_prime));
        out.push_back(std::floor(scale * p) / scale);
    }
    return out;
}

namespace {

struct Candidate {
    uint64_t index;
    CandidateReport report;
    WeightedGraph graph;
};

// Evaluate one seed: build H, count edges, verify.
Candidate evaluate_seed(const WeightedGraph& g, const SymMatrix& l, const KWiseSpace& space,
                        const std::vector<double>& probs, uint64_t index, const Seed& seed,
                        double eps_hat, uint64_t edge_threshold, uint64_t noise_seed) {
    Candidate cand;
    cand.index = index;
    std::vector<uint8_t> chosen = space.sample_at(seed);
    std::vector<Edge> kept;
    for (int i = 0; i < g.edge_count(); ++i) {
        if (!chosen[i]) continue;
        Edge e = g.edge(i);
        e.w = e.w / probs[i];
        kept.push_back(e);
    }
    cand.graph = WeightedGraph(g.vertex_count(), std::move(kept));
    cand.report.seed_index = index;
    cand.report.edge_count = static_cast<uint64_t>(cand.graph.edge_count());
    cand.report.verdict = Verdict::NO;
    cand.report.accepted = false;
    if (cand.report.edge_count <= edge_threshold) {
        VerifierParams vp;
        vp.eps = eps_hat;
        vp.alpha = 9.0 / 16.0;
        vp.mode = noise_seed == 0 ? PinvMode::ExactPinv : PinvMode::SolverPinv;
        vp.noise_seed = noise_seed;
        cand.report.verdict = verify(l, laplacian(cand.graph), vp);
        cand.report.accepted = cand.report.verdict == Verdict::YES;
    }
    return cand;
}

// Prefer an accepted candidate with the lowest seed index; among rejects keep
// the sparsest one seen (ties to the lower index).
bool better_fallback(const CandidateReport& a, const CandidateReport& b) {
    if ((a.verdict == Verdict::YES) != (b.verdict == Verdict::YES))
        return a.verdict == Verdict::YES;
    if (a.edge_count != b.edge_count) return a.edge_count < b.edge_count;
    return a.seed_index < b.seed_index;
}

} // namespace

EnumeratedCandidate enumerate_candidates(const WeightedGraph& g,
                                         const std::vector<double>& probs, int k, int t_bits,
                                         double eps_hat, uint64_t edge_threshold, uint64_t cap,
                                         int jobs, uint64_t noise_seed) {
    if (cap < 1) throw OutOfRange("derand: enumeration cap must be >= 1");
    KWiseSpace space(probs, k, t_bits);
    SymMatrix l = laplacian(g);

    const int bits = space.log2_seed_count();
    const uint64_t space_size = bits > 63 ? ~0ULL : (1ULL << bits);
    const uint64_t total = std::min<uint64_t>(space_size, cap);

    const int workers = std::max(1, jobs);
    const uint64_t block = 256;
    std::atomic<uint64_t> next_block{0};
    std::atomic<uint64_t> best_accept{~0ULL};
    std::mutex mu;
    Candidate best_candidate;      // lowest-index acceptance
    CandidateReport best_fallback; // best reject, reported on exhaustion
    bool have_fallback = false;
    std::exception_ptr worker_error;

    auto work = [&]() {
        try {
            while (true) {
                const uint64_t b = next_block.fetch_add(1);
                const uint64_t first = b * block;
                if (first >= total) return;
                // Seeds at or above an already-accepted index cannot win.
                if (first > best_accept.load()) return;
                const uint64_t count = std::min(block, total - first);
                SeedStream stream(space, first, count);
                Seed seed;
                uint64_t index = first;
                while (stream.next(seed)) {
                    if (index > best_accept.load()) break;
                    Candidate cand = evaluate_seed(g, l, space, probs, index, seed, eps_hat,
                                                   edge_threshold, noise_seed);
                    std::lock_guard<std::mutex> lock(mu);
                    if (cand.report.accepted) {
                        uint64_t cur = best_accept.load();
                        if (cand.index < cur) {
                            best_accept.store(cand.index);
                            best_candidate = std::move(cand);
                        }
                    } else if (!have_fallback || better_fallback(cand.report, best_fallback)) {
                        best_fallback = cand.report;
                        have_fallback = true;
                    }
                    ++index;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    if (best_accept.load() == ~0ULL) {
        throw ExhaustedSeeds("derand: no acceptable seed among " + std::to_string(total) +
                                 " enumerated (threshold " + std::to_string(edge_threshold) +
                                 " edges)",
                             best_fallback, total);
    }
    return EnumeratedCandidate{std::move(best_candidate.graph), best_candidate.report};
}

DerandResult derandomized_sparsify(const WeightedGraph& g, const DerandConfig& config) {
    DerivedConstants c = derived_constants(g, config);
    ResistanceTable table =
        config.noise_seed == 0
            ? effective_resistances_exact(g)
            : effective_resistances_approx(g, c.alpha_prime, config.noise_seed);
    std::vector<double> probs = truncated_probabilities(g, table, c.s, c.alpha_prime);
    for (size_t i = 0; i < probs.size(); ++i)
        if (probs[i] == 0.0)
            throw ZeroProbabilityEdge("derand: edge " + std::to_string(i) +
                                      " has zero truncated probability");
    EnumeratedCandidate best =
        enumerate_candidates(g, probs, config.k, c.t_bits, c.eps_hat, c.edge_threshold,
                             config.enumeration_cap, config.parallel_width, config.noise_seed);
    return DerandResult{std::move(best.graph), best.report, c};
}

} // namespace erspar
