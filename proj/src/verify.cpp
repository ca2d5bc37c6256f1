#include "erspar/verify.hpp"

#include <cmath>

namespace erspar {

double gamma_for_alpha(double alpha) {
    if (!(alpha > 0.0)) throw OutOfRange("gamma_for_alpha: alpha must be positive");
    return 1.0 - 2.0 / (1.0 + std::sqrt(1.0 + alpha / (2.0 + alpha)));
}

TraceStats trace_power_statistic(const SymMatrix& l, const SymMatrix& lt, double eps, double alpha,
                                 const SymMatrix& pinv, double gamma) {
    if (!(eps > 0.0 && eps < 1.0)) throw OutOfRange("verify: eps must be in (0,1)");
    if (!(alpha > 0.0)) throw OutOfRange("verify: alpha must be positive");
    if (l.dim() != lt.dim() || l.dim() != pinv.dim())
        throw LengthMismatch("verify: dimension mismatch");

    // M = ((1/(1+gamma)) (Lt - L) pinv / eps)^2. Similar to a symmetric matrix,
    // so its eigenvalues are real and nonnegative; traces of the asymmetric
    // powers are taken directly.
    const double scale = 1.0 / ((1.0 + gamma) * eps);
    Matrix base = mat_scale(matmul((lt - l).as_matrix(), pinv.as_matrix()), scale);
    Matrix m = matmul(base, base);

    TraceStats stats;
    stats.threshold = trace(m);
    if (stats.threshold <= 1.0 + 1e-9) {
        // All eigenvalues of M are nonnegative and sum to Tr(M) <= 1, so the
        // spectral radius is already at most 1; the exponent formula is
        // undefined here.
        stats.short_circuit = true;
        stats.value = stats.threshold;
        return stats;
    }
    stats.exponent =
        static_cast<long>(std::ceil(std::log(stats.threshold) / std::log1p(alpha)));
    if (stats.exponent < 1) stats.exponent = 1;
    stats.value = trace(mat_power(m, stats.exponent));
    return stats;
}

namespace {

// Nullity of a PSD matrix under the shared zero threshold.
int kernel_dimension(const SymMatrix& m) {
    std::vector<double> vals = eigenvalues_sym(m);
    const double thr = zero_eigenvalue_threshold(m.dim(), vals);
    int nullity = 0;
    for (double v : vals)
        if (std::fabs(v) <= thr) ++nullity;
    return nullity;
}

} // namespace

Verdict verify(const SymMatrix& l, const SymMatrix& lt, const VerifierParams& params) {
    if (l.dim() != lt.dim()) throw LengthMismatch("verify: Laplacians on different vertex sets");
    if (kernel_dimension(l) != 1)
        throw Disconnected("verify: reference Laplacian is not connected");
    // A candidate with a larger kernel (disconnected graph) approximates L at
    // no eps at all.
    if (kernel_dimension(lt) != 1) return Verdict::NO;

    double gamma = 0.0;
    double alpha_eff = params.alpha;
    SymMatrix pinv;
    if (params.mode == PinvMode::ExactPinv) {
        pinv = pseudoinverse(l);
    } else {
        gamma = gamma_for_alpha(params.alpha);
        pinv = perturbed_pseudoinverse(l, gamma, params.noise_seed);
        alpha_eff = params.alpha / 2.0;
    }
    TraceStats stats = trace_power_statistic(l, lt, params.eps, alpha_eff, pinv, gamma);
    if (stats.short_circuit) return Verdict::YES;
    const double slack = params.tol * std::max(1.0, stats.threshold);
    return stats.value <= stats.threshold + slack ? Verdict::YES : Verdict::NO;
}

} // namespace erspar
