#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "erspar/graph.hpp"
#include "erspar/linalg.hpp"
#include "erspar/lowerbound.hpp"
#include "test_util.hpp"

using namespace erspar;

namespace {

SymMatrix k3_laplacian() { return laplacian(complete_graph(3)); }

double rel_frobenius(const SymMatrix& a, const SymMatrix& b) {
    const double d = (a - b).frobenius_norm();
    const double n = b.frobenius_norm();
    return n == 0.0 ? d : d / n;
}

} // namespace

TEST_CASE("eigen_sym on tiny frozen cases") {
    auto id = eigenvalues_sym(SymMatrix::identity(3));
    for (double v : id) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    SymMatrix flip(2, {0, 1, 1, 0});
    auto ev = eigenvalues_sym(flip);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));

    // characteristic polynomial of L(K_3) is lambda (lambda - 3)^2
    auto lk3 = eigenvalues_sym(k3_laplacian());
    CHECK(std::fabs(lk3[0]) < 1e-12);
    CHECK(lk3[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lk3[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("eigen_sym reconstruction and orthonormality invariants") {
    std::mt19937_64 rng(41);
    for (int n : {1, 2, 3, 7, 15, 30}) {
        SymMatrix m = test::random_sym(rng, n);
        EigenDecomposition e = eigen_sym(m);
        REQUIRE(static_cast<int>(e.values.size()) == n);
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1]);

        // U diag U^T returns the input to relative Frobenius 1e-10.
        Matrix ud(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) ud(i, j) = e.vectors(i, j) * e.values[j];
        Matrix ut(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ut(i, j) = e.vectors(j, i);
        SymMatrix rec(matmul(ud, ut));
        CHECK(rel_frobenius(rec, m) < 1e-10);

        SymMatrix gram(matmul(ut, e.vectors));
        CHECK(test::max_abs_diff(gram, SymMatrix::identity(n)) < 1e-10);
    }
}

TEST_CASE("pseudoinverse frozen cases and Penrose conditions") {
    // single unit edge: L^2 = 2L, so L/4 satisfies the Penrose conditions
    SymMatrix l1(2, {1, -1, -1, 1});
    CHECK(test::max_abs_diff(pseudoinverse(l1), l1 * 0.25) < 1e-12);

    // L(K_3)^2 = 3 L(K_3)
    SymMatrix lk3 = k3_laplacian();
    CHECK(test::max_abs_diff(pseudoinverse(lk3), lk3 * (1.0 / 9.0)) < 1e-12);

    // a projection is its own pseudoinverse
    SymMatrix pi2 = projection_pi(2);
    CHECK(test::max_abs_diff(pseudoinverse(pi2), pi2) < 1e-12);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 12);
        SymMatrix m = trial % 2 ? test::random_psd(rng, n)
                                : laplacian(test::random_connected_graph(rng, n, 0.4, 0.1, 10.0));
        SymMatrix p = pseudoinverse(m);
        Matrix mm = m.as_matrix(), pp = p.as_matrix();
        const double scale = std::max(1.0, m.frobenius_norm());
        CHECK(SymMatrix(matmul(matmul(mm, pp), mm)).frobenius_norm() / scale ==
              doctest::Approx(m.frobenius_norm() / scale).epsilon(1e-8));
        CHECK(test::max_abs_diff(SymMatrix(matmul(matmul(mm, pp), mm)), m) < 1e-8 * scale);
        CHECK(test::max_abs_diff(SymMatrix(matmul(matmul(pp, mm), pp)), p) <
              1e-8 * std::max(1.0, p.frobenius_norm()));
        // M M^+ Hermitian
        Matrix mp = matmul(mm, pp);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(std::fabs(mp(i, j) - mp(j, i)) < 1e-8);
    }
}

TEST_CASE("psd_sqrt") {
    CHECK(test::max_abs_diff(psd_sqrt(SymMatrix::identity(4)), SymMatrix::identity(4)) < 1e-12);
    CHECK(test::max_abs_diff(psd_sqrt(SymMatrix::diagonal({4, 9})), SymMatrix::diagonal({2, 3})) <
          1e-12);
    SymMatrix lk3 = k3_laplacian();
    CHECK(test::max_abs_diff(psd_sqrt(lk3), lk3 * (1.0 / std::sqrt(3.0))) < 1e-12);
    CHECK_THROWS_AS(psd_sqrt(SymMatrix::diagonal({-1, 1})), NotPSD);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        SymMatrix m = test::random_psd(rng, 3 + static_cast<int>(rng() % 10));
        SymMatrix x = psd_sqrt(m);
        CHECK(rel_frobenius(SymMatrix(matmul(x.as_matrix(), x.as_matrix())), m) < 1e-8);
    }
}

TEST_CASE("pinv_sqrt composes in either order") {
    CHECK(test::max_abs_diff(pinv_sqrt(SymMatrix::identity(3)), SymMatrix::identity(3)) < 1e-12);
    CHECK(test::max_abs_diff(pinv_sqrt(SymMatrix::diagonal({4, 0})),
                             SymMatrix::diagonal({0.5, 0})) < 1e-12);

    SymMatrix lk3 = k3_laplacian();
    SymMatrix h = pinv_sqrt(lk3);
    CHECK(test::max_abs_diff(SymMatrix(matmul(h.as_matrix(), h.as_matrix())),
                             pseudoinverse(lk3)) < 1e-10);
    // (M^+)^{1/2} agrees with (M^{1/2})^+
    CHECK(test::max_abs_diff(h, pseudoinverse(psd_sqrt(lk3))) < 1e-8);
}

TEST_CASE("projection_pi") {
    SymMatrix pi2 = projection_pi(2);
    CHECK(pi2(0, 0) == doctest::Approx(0.5));
    CHECK(pi2(0, 1) == doctest::Approx(-0.5));
    for (int n : {2, 5, 9}) {
        SymMatrix pi = projection_pi(n);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += pi(i, j);
            CHECK(std::fabs(row) < 1e-12); // Pi 1 = 0
        }
    }
    SymMatrix lk3 = k3_laplacian();
    SymMatrix ll = SymMatrix(matmul(lk3.as_matrix(), pseudoinverse(lk3).as_matrix()));
    CHECK(test::max_abs_diff(ll, projection_pi(3)) < 1e-10);
}

TEST_CASE("projection identities for connected Laplacians") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        SymMatrix l = laplacian(test::random_connected_graph(rng, n, 0.5, 0.2, 5.0));
        SymMatrix lp = pseudoinverse(l);
        SymMatrix pi = projection_pi(n);
        CHECK(test::max_abs_diff(SymMatrix(matmul(l.as_matrix(), lp.as_matrix())), pi) < 1e-9);
        CHECK(test::max_abs_diff(SymMatrix(matmul(lp.as_matrix(), l.as_matrix())), pi) < 1e-9);
        SymMatrix h = pinv_sqrt(l);
        CHECK(test::max_abs_diff(
                  SymMatrix(matmul(matmul(h.as_matrix(), l.as_matrix()), h.as_matrix())), pi) <
              1e-9);
    }
}

TEST_CASE("spectral_approx_check") {
    SymMatrix l = k3_laplacian();
    CHECK(spectral_approx_check(l, l, 0.01));
    CHECK_FALSE(spectral_approx_check(l * (1.0 + 2.0 * 0.3), l, 0.3));

    // K_3 minus one edge against K_3: restricted eigenvalues are 1/3 and 1.
    WeightedGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(spectral_approx_check(laplacian(path), l, 0.9));
    CHECK_FALSE(spectral_approx_check(laplacian(path), l, 0.5));

    // kernel mismatch: disconnected candidate
    WeightedGraph two(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(spectral_approx_check(laplacian(two), l, 0.9), KernelMismatch);
    CHECK_THROWS_AS(spectral_approx_check(l, laplacian(two), 0.9), KernelMismatch);
}

TEST_CASE("approx check direction swap") {
    // if A ~ B at eps then B ~ A at eps/(1-eps)
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 8);
        WeightedGraph g = test::random_connected_graph(rng, n, 0.5, 0.5, 2.0);
        SymMatrix b = laplacian(g);
        std::uniform_real_distribution<double> f(0.9, 1.1);
        std::vector<Edge> edges = g.edges();
        for (auto& e : edges) e.w *= f(rng);
        SymMatrix a = laplacian(WeightedGraph(n, edges));
        const double eps = 0.2;
        if (spectral_approx_check(a, b, eps))
            CHECK(spectral_approx_check(b, a, eps / (1.0 - eps)));
    }
}

TEST_CASE("norm_of_sum monotonicity") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        SymMatrix a = test::random_psd(rng, n);
        SymMatrix b = test::random_psd(rng, n);
        SymMatrix c = b + test::random_psd(rng, n); // B <= C
        CHECK(spectral_radius_sym(a + b) <= spectral_radius_sym(a + c) + 1e-10);
    }
}

TEST_CASE("congruence preserves approximation") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        SymMatrix b = test::random_psd(rng, n) + SymMatrix::identity(n) * 0.5;
        std::uniform_real_distribution<double> f(0.95, 1.05);
        SymMatrix a = b * f(rng);
        const double eps = 0.1;
        REQUIRE(spectral_approx_check(a, b, eps));
        SymMatrix c = test::random_sym(rng, n);
        Matrix cm = c.as_matrix();
        SymMatrix cac(matmul(matmul(cm, a.as_matrix()), cm));
        SymMatrix cbc(matmul(matmul(cm, b.as_matrix()), cm));
        CHECK(spectral_approx_check(cac, cbc, eps));
    }
}

TEST_CASE("perturbed_pseudoinverse") {
    SymMatrix l = k3_laplacian();
    // seed 0 reserved: all scale factors are exactly 1
    CHECK(test::max_abs_diff(perturbed_pseudoinverse(l, 0.3, 0), pseudoinverse(l)) < 1e-12);

    SymMatrix p1 = perturbed_pseudoinverse(l, 0.2, 1);
    SymMatrix p2 = perturbed_pseudoinverse(l, 0.2, 2);
    CHECK(test::max_abs_diff(p1, p2) > 1e-6); // distinct seeds differ
    CHECK(spectral_approx_check(p1, pseudoinverse(l), 0.2));
    CHECK(spectral_approx_check(p2, pseudoinverse(l), 0.2));

    CHECK_THROWS_AS(perturbed_pseudoinverse(l, 1.5, 1), OutOfRange);
    CHECK_THROWS_AS(perturbed_pseudoinverse(SymMatrix::diagonal({-1, 2}), 0.1, 1), NotPSD);

    // determinism
    CHECK(test::max_abs_diff(p1, perturbed_pseudoinverse(l, 0.2, 1)) == 0.0);
}

TEST_CASE("trace, powers, spectral radius") {
    CHECK(trace(SymMatrix::identity(4)) == doctest::Approx(4.0));
    SymMatrix d23 = SymMatrix::diagonal({2, 3});
    SymMatrix cube = mat_power(d23, 3);
    CHECK(cube(0, 0) == doctest::Approx(8.0));
    CHECK(cube(1, 1) == doctest::Approx(27.0));
    CHECK(spectral_radius_sym(k3_laplacian()) == doctest::Approx(3.0).epsilon(1e-12));

    for (long j : {1L, 2L, 3L, 7L, 64L, 1000L}) {
        const int bits = static_cast<int>(std::floor(std::log2(static_cast<double>(j)))) + 1;
        CHECK(mat_power_mult_count(j) <= 2 * bits);
    }
}

TEST_CASE("matrix text format round trip") {
    std::mt19937_64 rng(23);
    SymMatrix m = test::random_sym(rng, 5);
    std::istringstream in(serialize_matrix(m));
    SymMatrix back = parse_matrix(in);
    CHECK(test::max_abs_diff(m, back) == 0.0);
}
