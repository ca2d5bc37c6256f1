#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "erspar/lowerbound.hpp"
#include "erspar/verify.hpp"
#include "test_util.hpp"

using namespace erspar;

namespace {

// Spectral radius of M = ((1/(1+gamma)) (Lt - L) P / eps)^2 through the
// symmetric similar matrix P^{1/2} (Lt - L) P^{1/2}.
double rho_via_similarity(const SymMatrix& l, const SymMatrix& lt, double eps,
                          const SymMatrix& pinv, double gamma) {
    SymMatrix root = psd_sqrt(pinv);
    Matrix mid = matmul(matmul(root.as_matrix(), (lt - l).as_matrix()), root.as_matrix());
    const double r = spectral_radius_sym(SymMatrix(mid)) / ((1.0 + gamma) * eps);
    return r * r;
}

// A reweighted copy of g whose Laplacian stays strictly inside the eps band.
WeightedGraph jiggle(std::mt19937_64& rng, const WeightedGraph& g, double spread) {
    std::uniform_real_distribution<double> f(1.0 - spread, 1.0 + spread);
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w *= f(rng);
    return WeightedGraph(g.vertex_count(), edges);
}

} // namespace

TEST_CASE("gamma_for_alpha") {
    CHECK(gamma_for_alpha(1e-9) < 1e-9);
    CHECK(gamma_for_alpha(2.0) == doctest::Approx(0.10102).epsilon(1e-4));
    for (double alpha : {0.01, 0.5, 1.0, 2.0, 3.99}) {
        const double g = gamma_for_alpha(alpha);
        const double lhs = std::pow((1.0 + g) / (1.0 - g), 2.0) * (1.0 + alpha / 2.0);
        CHECK(std::fabs(lhs - (1.0 + alpha)) < 1e-12);
    }
    CHECK_THROWS_AS(gamma_for_alpha(0.0), OutOfRange);
}

TEST_CASE("verify frozen cases") {
    SymMatrix l = laplacian(complete_graph(3));

    VerifierParams p{0.5, 0.5};
    CHECK(verify(l, l, p) == Verdict::YES); // M = 0 short-circuits

    // 2L: ratio 2 > 1 + 0.5 sqrt(1.5), so the verifier must say NO
    CHECK(verify(l, l * 2.0, p) == Verdict::NO);

    // 1.2L at eps = 0.25: ratios 1.2 <= 1.25, must say YES at any alpha
    for (double alpha : {0.1, 0.5, 2.0})
        CHECK(verify(l, l * 1.2, VerifierParams{0.25, alpha}) == Verdict::YES);

    // same cases through the perturbed oracle
    for (uint64_t seed : {0ull, 1ull, 2ull, 3ull}) {
        VerifierParams sp{0.5, 0.5, PinvMode::SolverPinv, seed};
        CHECK(verify(l, l, sp) == Verdict::YES);
        CHECK(verify(l, l * 2.0, sp) == Verdict::NO);
        CHECK(verify(l, l * 1.2, VerifierParams{0.25, 0.5, PinvMode::SolverPinv, seed}) ==
              Verdict::YES);
    }
}

TEST_CASE("trace_power_statistic internals") {
    SymMatrix l = laplacian(complete_graph(3));
    SymMatrix pinv = pseudoinverse(l);

    TraceStats same = trace_power_statistic(l, l, 0.5, 0.5, pinv, 0.0);
    CHECK(same.short_circuit);
    CHECK(same.threshold == doctest::Approx(0.0));

    // (L, 2L, eps=0.5): M = (2 Pi)^2 = 4 Pi, T = 8, t = ceil(ln 8 / ln 1.5) = 6
    TraceStats far = trace_power_statistic(l, l * 2.0, 0.5, 0.5, pinv, 0.0);
    CHECK_FALSE(far.short_circuit);
    CHECK(far.threshold == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(far.exponent == 6);
    CHECK(far.value == doctest::Approx(2.0 * std::pow(4.0, 6)).epsilon(1e-9));
    CHECK(far.value > far.threshold);

    // scaling the candidate away from L never shrinks value relative to T
    double prev_ratio = 0.0;
    for (double c = 1.55; c < 2.5; c += 0.15) {
        TraceStats s = trace_power_statistic(l, l * c, 0.25, 0.5, pinv, 0.0);
        REQUIRE_FALSE(s.short_circuit);
        const double ratio = s.value / s.threshold;
        CHECK(ratio >= prev_ratio - 1e-9);
        prev_ratio = ratio;
    }
}

TEST_CASE("exponent stays logarithmic") {
    SymMatrix l = laplacian(complete_graph(6));
    SymMatrix pinv = pseudoinverse(l);
    TraceStats s = trace_power_statistic(l, l * 3.0, 0.1, 9.0 / 16.0, pinv, 0.0);
    const double rho = rho_via_similarity(l, l * 3.0, 0.1, pinv, 0.0);
    CHECK(s.threshold <= 6.0 * rho + 1e-6);
    CHECK(s.exponent <= std::ceil(std::log(s.threshold) / std::log1p(9.0 / 16.0)) + 1);
    // repeated squaring: O(log t) multiplications
    CHECK(mat_power_mult_count(s.exponent) <=
          2 * static_cast<int>(std::log2(static_cast<double>(s.exponent))) + 2);
}

TEST_CASE("boundary of the eps band stays YES") {
    // (1 +- eps) L sits exactly on the band edge; the relative slack on the
    // trace comparison must keep these complete.
    SymMatrix l = laplacian(complete_graph(4));
    for (double eps : {0.25, 0.5}) {
        CHECK(verify(l, l * (1.0 + eps), VerifierParams{eps, 0.5}) == Verdict::YES);
        CHECK(verify(l, l * (1.0 - eps), VerifierParams{eps, 0.5}) == Verdict::YES);
    }
}

TEST_CASE("kernel handling") {
    SymMatrix l = laplacian(complete_graph(4));
    SymMatrix disc = laplacian(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}}));
    VerifierParams p{0.3, 0.5};
    CHECK(verify(l, disc, p) == Verdict::NO);          // disconnected candidate
    CHECK_THROWS_AS(verify(disc, l, p), Disconnected); // disconnected reference
    CHECK_THROWS_AS(verify(l, laplacian(complete_graph(5)), p), LengthMismatch);
}

TEST_CASE("completeness and soundness on random pairs") {
    std::mt19937_64 rng(1234);
    int done = 0;
    while (done < 30) {
        const int n = 4 + static_cast<int>(rng() % 12);
        WeightedGraph g = test::random_connected_graph(rng, n, 0.5, 0.5, 2.0);
        SymMatrix l = laplacian(g);
        const double eps = (rng() % 2) ? 0.1 : 0.3;
        const double alpha = (rng() % 2) ? 0.5 : 9.0 / 16.0;

        SymMatrix close = laplacian(jiggle(rng, g, 0.6 * eps));
        REQUIRE(spectral_approx_check(close, l, eps));
        SymMatrix far = l * (1.0 + 1.3 * eps * std::sqrt(1.0 + alpha));
        REQUIRE_FALSE(spectral_approx_check(far, l, eps * std::sqrt(1.0 + alpha)));

        CHECK(verify(l, close, VerifierParams{eps, alpha}) == Verdict::YES);
        CHECK(verify(l, far, VerifierParams{eps, alpha}) == Verdict::NO);
        const uint64_t seed = 1 + (rng() % 5);
        CHECK(verify(l, close, VerifierParams{eps, alpha, PinvMode::SolverPinv, seed}) ==
              Verdict::YES);
        CHECK(verify(l, far, VerifierParams{eps, alpha, PinvMode::SolverPinv, seed}) ==
              Verdict::NO);
        ++done;
    }
}

TEST_CASE("perturbation sandwich") {
    // ((1-gamma)/(1+gamma))^2 rho(M) <= rho(M^) <= rho(M)
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 8);
        WeightedGraph g = test::random_connected_graph(rng, n, 0.5, 0.5, 2.0);
        SymMatrix l = laplacian(g);
        SymMatrix lt = laplacian(jiggle(rng, g, 0.3));
        const double alpha = 0.5, eps = 0.2;
        const double gamma = gamma_for_alpha(alpha);

        const double rho_exact = rho_via_similarity(l, lt, eps, pseudoinverse(l), 0.0);
        const double rho_hat = rho_via_similarity(
            l, lt, eps, perturbed_pseudoinverse(l, gamma, trial + 1), gamma);
        const double lo = std::pow((1.0 - gamma) / (1.0 + gamma), 2.0);
        CHECK(rho_hat <= rho_exact + 1e-9);
        CHECK(rho_hat >= lo * rho_exact - 1e-9);
    }
}

TEST_CASE("determinism") {
    SymMatrix l = laplacian(petersen_graph());
    SymMatrix lt = l * 1.4;
    VerifierParams p{0.3, 0.5, PinvMode::SolverPinv, 42};
    CHECK(verify(l, lt, p) == verify(l, lt, p));
}
