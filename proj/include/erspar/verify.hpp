#ifndef ERSPAR_VERIFY_HPP
#define ERSPAR_VERIFY_HPP

#include <cstdint>

#include "erspar/linalg.hpp"

namespace erspar {

enum class Verdict { YES, NO };

enum class PinvMode { ExactPinv, SolverPinv };

struct VerifierParams {
    double eps;   // in (0,1)
    double alpha; // > 0
    PinvMode mode = PinvMode::ExactPinv;
    uint64_t noise_seed = 0; // SolverPinv only; gamma is derived from alpha
    // Relative slack on the Tr(M^t) <= Tr(M) comparison. The dichotomy is
    // exact in exact arithmetic; the slack keeps completeness on the boundary.
    double tol = 1e-9;
};

// gamma = 1 - 2 / (1 + sqrt(1 + alpha/(2+alpha))), chosen so that
// ((1+gamma)/(1-gamma))^2 * (1 + alpha/2) = 1 + alpha.
double gamma_for_alpha(double alpha);

// Internals of the trace-power test: M = ((1/(1+gamma)) (Lt - L) pinv / eps)^2,
// threshold = Tr(M), exponent = ceil(ln Tr(M) / ln(1+alpha)), value = Tr(M^exponent).
// short_circuit is set when Tr(M) <= 1, in which case the spectral radius of M
// is already at most 1 and the answer is YES without powering.
struct TraceStats {
    double threshold = 0.0;
    long exponent = 0;
    double value = 0.0;
    bool short_circuit = false;
};

TraceStats trace_power_statistic(const SymMatrix& l, const SymMatrix& lt, double eps, double alpha,
                                 const SymMatrix& pinv, double gamma);

// Trace-power spectral-proximity tester. YES whenever Lt approximates L within
// eps; NO whenever it fails at eps * sqrt(1 + alpha); either answer in the gap.
// L must be the Laplacian of a connected graph (Disconnected otherwise); a
// kernel mismatch in Lt (e.g. a disconnected candidate) yields NO.
Verdict verify(const SymMatrix& l, const SymMatrix& lt, const VerifierParams& params);

} // namespace erspar

#endif
