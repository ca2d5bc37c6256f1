#include "erspar/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace erspar {

Matrix::Matrix(int dim, std::vector<double> entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(dim) * dim)
        throw LengthMismatch("matrix entry count does not match dimension");
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw LengthMismatch("matmul: dimension mismatch");
    const int n = a.dim();
    Matrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix mat_sub(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw LengthMismatch("mat_sub: dimension mismatch");
    Matrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Matrix mat_scale(const Matrix& a, double s) {
    Matrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) * s;
    return c;
}

double trace(const Matrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

Matrix mat_power(const Matrix& m, long j) {
    if (j < 1) throw OutOfRange("mat_power: exponent must be >= 1");
    Matrix base = m;
    Matrix result;
    bool have = false;
    long e = j;
    while (e > 0) {
        if (e & 1) {
            result = have ? matmul(result, base) : base;
            have = true;
        }
        e >>= 1;
        if (e > 0) base = matmul(base, base);
    }
    return result;
}

int mat_power_mult_count(long j) {
    // Mirrors mat_power: one squaring per dropped bit, one accumulate per set
    // bit beyond the first.
    int count = 0;
    bool have = false;
    long e = j;
    while (e > 0) {
        if (e & 1) {
            if (have) ++count;
            have = true;
        }
        e >>= 1;
        if (e > 0) ++count;
    }
    return count;
}

SymMatrix::SymMatrix(int dim, const std::vector<double>& entries) : dim_(dim) {
    if (entries.size() != static_cast<size_t>(dim) * dim)
        throw LengthMismatch("SymMatrix: entry count does not match dimension");
    a_.resize(entries.size());
    for (int i = 0; i < dim; ++i) {
        a_[static_cast<size_t>(i) * dim + i] = entries[static_cast<size_t>(i) * dim + i];
        for (int j = i + 1; j < dim; ++j) {
            const double v = 0.5 * (entries[static_cast<size_t>(i) * dim + j] +
                                    entries[static_cast<size_t>(j) * dim + i]);
            a_[static_cast<size_t>(i) * dim + j] = v;
            a_[static_cast<size_t>(j) * dim + i] = v;
        }
    }
}

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[i]);
    return m;
}

void SymMatrix::set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * dim_ + j] = v;
    a_[static_cast<size_t>(j) * dim_ + i] = v;
}

void SymMatrix::add(int i, int j, double v) {
    a_[static_cast<size_t>(i) * dim_ + j] += v;
    if (i != j) a_[static_cast<size_t>(j) * dim_ + i] += v;
}

Matrix SymMatrix::as_matrix() const { return Matrix(dim_, a_); }

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
    if (dim_ != o.dim_) throw LengthMismatch("SymMatrix+: dimension mismatch");
    SymMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
    if (dim_ != o.dim_) throw LengthMismatch("SymMatrix-: dimension mismatch");
    SymMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

SymMatrix SymMatrix::operator*(double c) const {
    SymMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double SymMatrix::max_abs() const {
    double s = 0.0;
    for (double v : a_) s = std::max(s, std::fabs(v));
    return s;
}

namespace {

// Cyclic Jacobi. `a` holds the symmetric matrix (row-major, modified in
// place); if `v` is non-null it accumulates the rotations. Returns the final
// diagonal, unsorted.
std::vector<double> jacobi_sweeps(std::vector<double>& a, int n, std::vector<double>* v) {
    if (v) {
        std::fill(v->begin(), v->end(), 0.0);
        for (int i = 0; i < n; ++i) (*v)[static_cast<size_t>(i) * n + i] = 1.0;
    }
    double norm_f = 0.0;
    for (double x : a) norm_f += x * x;
    norm_f = std::sqrt(norm_f);
    const double tol = 1e-12 * norm_f;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double x = a[static_cast<size_t>(i) * n + j];
                s += 2.0 * x * x;
            }
        return std::sqrt(s);
    };

    if (norm_f == 0.0 || n == 1) {
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = a[static_cast<size_t>(i) * n + i];
        return d;
    }

    const int max_sweeps = 100;
    // Rotations with |a_pq| below this cannot move the off-diagonal norm past
    // the tolerance; skipping them avoids denormal churn near convergence.
    const double skip = tol / (static_cast<double>(n) * n);
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= tol) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<size_t>(p) * n + q];
                if (std::fabs(apq) <= skip) continue;
                const double app = a[static_cast<size_t>(p) * n + p];
                const double aqq = a[static_cast<size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::fabs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a[static_cast<size_t>(p) * n + p] = app - t * apq;
                a[static_cast<size_t>(q) * n + q] = aqq + t * apq;
                a[static_cast<size_t>(p) * n + q] = 0.0;
                a[static_cast<size_t>(q) * n + p] = 0.0;
                double* rp = a.data() + static_cast<size_t>(p) * n;
                double* rq = a.data() + static_cast<size_t>(q) * n;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = rp[i];
                    const double aiq = rq[i];
                    const double np = c * aip - s * aiq;
                    const double nq = s * aip + c * aiq;
                    rp[i] = np;
                    rq[i] = nq;
                    a[static_cast<size_t>(i) * n + p] = np;
                    a[static_cast<size_t>(i) * n + q] = nq;
                }
                if (v) {
                    double* vd = v->data();
                    for (int i = 0; i < n; ++i) {
                        const double vip = vd[static_cast<size_t>(i) * n + p];
                        const double viq = vd[static_cast<size_t>(i) * n + q];
                        vd[static_cast<size_t>(i) * n + p] = c * vip - s * viq;
                        vd[static_cast<size_t>(i) * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
    }
    if (!converged && off_norm() > tol)
        throw NoConvergence("eigen_sym: Jacobi did not converge within 100 sweeps");
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = a[static_cast<size_t>(i) * n + i];
    return d;
}

} // namespace

EigenDecomposition eigen_sym(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a = m.data();
    std::vector<double> v(static_cast<size_t>(n) * n);
    std::vector<double> d = jacobi_sweeps(a, n, &v);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });

    EigenDecomposition e;
    e.values.resize(n);
    e.vectors = Matrix(n);
    for (int j = 0; j < n; ++j) {
        e.values[j] = d[order[j]];
        for (int i = 0; i < n; ++i) e.vectors(i, j) = v[static_cast<size_t>(i) * n + order[j]];
    }
    return e;
}

std::vector<double> eigenvalues_sym(const SymMatrix& m) {
    std::vector<double> a = m.data();
    std::vector<double> d = jacobi_sweeps(a, m.dim(), nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

double zero_eigenvalue_threshold(int dim, const std::vector<double>& values) {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, std::fabs(v));
    return dim * std::numeric_limits<double>::epsilon() * mx;
}

namespace {

// U diag(f(lambda)) U^T for a spectral function f.
template <typename F>
SymMatrix spectral_map(const EigenDecomposition& e, F&& f) {
    const int n = e.vectors.dim();
    Matrix ud(n);
    for (int j = 0; j < n; ++j) {
        const double fj = f(e.values[j]);
        for (int i = 0; i < n; ++i) ud(i, j) = e.vectors(i, j) * fj;
    }
    Matrix ut(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ut(i, j) = e.vectors(j, i);
    return SymMatrix(matmul(ud, ut));
}

void require_psd(const EigenDecomposition& e, const char* who) {
    double mx = 0.0;
    for (double v : e.values) mx = std::max(mx, std::fabs(v));
    for (double v : e.values)
        if (v < -1e-8 * mx)
            throw NotPSD(std::string(who) + ": eigenvalue " + std::to_string(v) +
                         " below PSD tolerance");
}

} // namespace

SymMatrix pseudoinverse(const SymMatrix& m) {
    EigenDecomposition e = eigen_sym(m);
    const double thr = zero_eigenvalue_threshold(m.dim(), e.values);
    return spectral_map(e, [thr](double l) { return std::fabs(l) <= thr ? 0.0 : 1.0 / l; });
}

SymMatrix psd_sqrt(const SymMatrix& m) {
    EigenDecomposition e = eigen_sym(m);
    require_psd(e, "psd_sqrt");
    return spectral_map(e, [](double l) { return l <= 0.0 ? 0.0 : std::sqrt(l); });
}

SymMatrix pinv_sqrt(const SymMatrix& m) { return psd_sqrt(pseudoinverse(m)); }

SymMatrix projection_pi(int n) {
    if (n < 1) throw OutOfRange("projection_pi: n must be >= 1");
    SymMatrix p(n);
    const double j = 1.0 / n;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) p.set(r, c, (r == c ? 1.0 : 0.0) - j);
    return p;
}

double trace(const SymMatrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

SymMatrix mat_power(const SymMatrix& m, long j) { return SymMatrix(mat_power(m.as_matrix(), j)); }

double spectral_radius_sym(const SymMatrix& m) {
    std::vector<double> d = eigenvalues_sym(m);
    double r = 0.0;
    for (double v : d) r = std::max(r, std::fabs(v));
    return r;
}

SpectralApproxChecker::SpectralApproxChecker(const SymMatrix& b) : dim_(b.dim()) {
    EigenDecomposition e = eigen_sym(b);
    require_psd(e, "spectral_approx_check");
    const double thr = zero_eigenvalue_threshold(dim_, e.values);
    nullity_ = 0;
    for (int j = 0; j < dim_; ++j) {
        if (std::fabs(e.values[j]) <= thr) {
            ++nullity_;
            std::vector<double> u(dim_);
            for (int i = 0; i < dim_; ++i) u[i] = e.vectors(i, j);
            kernel_basis_.push_back(std::move(u));
        }
    }
    pinv_sqrt_b_ =
        spectral_map(e, [thr](double l) { return std::fabs(l) <= thr ? 0.0 : 1.0 / std::sqrt(l); });
    b_scale_ = b.frobenius_norm();
}

bool SpectralApproxChecker::check(const SymMatrix& a, double eps) const {
    if (a.dim() != dim_) throw LengthMismatch("spectral_approx_check: dimension mismatch");

    // ker(B) must be contained in ker(A).
    const double a_scale = std::max(a.frobenius_norm(), 1e-300);
    for (const auto& u : kernel_basis_) {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += a(i, j) * u[j];
            r2 += s * s;
        }
        if (std::sqrt(r2) > 1e-7 * a_scale)
            throw KernelMismatch("spectral_approx_check: ker(B) not contained in ker(A)");
    }

    Matrix y = pinv_sqrt_b_.as_matrix();
    SymMatrix s(matmul(matmul(y, a.as_matrix()), y));
    std::vector<double> vals = eigenvalues_sym(s); // ascending

    // The nullity(B) smallest-magnitude eigenvalues belong to ker(B); the rest
    // are the eigenvalues of B^{+/2} A B^{+/2} restricted to im(B).
    std::sort(vals.begin(), vals.end(),
              [](double x, double yv) { return std::fabs(x) < std::fabs(yv); });
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, std::fabs(v));
    const double tol = 1e-9;
    for (size_t i = nullity_; i < vals.size(); ++i) {
        // An extra zero on im(B) means A annihilates a direction B does not.
        if (std::fabs(vals[i]) <= 1e-8 * mx)
            throw KernelMismatch("spectral_approx_check: ker(A) strictly larger than ker(B)");
        if (vals[i] < 1.0 - eps - tol || vals[i] > 1.0 + eps + tol) return false;
    }
    return true;
}

bool spectral_approx_check(const SymMatrix& a, const SymMatrix& b, double eps) {
    return SpectralApproxChecker(b).check(a, eps);
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

SymMatrix perturbed_pseudoinverse(const SymMatrix& m, double gamma, uint64_t noise_seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw OutOfRange("perturbed_pseudoinverse: gamma must be in (0,1)");
    EigenDecomposition e = eigen_sym(m);
    require_psd(e, "perturbed_pseudoinverse");
    const double thr = zero_eigenvalue_threshold(m.dim(), e.values);
    std::vector<double> factor(e.values.size(), 1.0);
    if (noise_seed != 0) {
        for (size_t i = 0; i < factor.size(); ++i) {
            const uint64_t z = splitmix64(noise_seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
            const double u = static_cast<double>(z >> 11) * 0x1.0p-53; // [0,1)
            factor[i] = 1.0 - gamma + 2.0 * gamma * u;
        }
    }
    const int n = m.dim();
    Matrix ud(n);
    for (int j = 0; j < n; ++j) {
        const double l = e.values[j];
        const double fj = std::fabs(l) <= thr ? 0.0 : factor[j] / l;
        for (int i = 0; i < n; ++i) ud(i, j) = e.vectors(i, j) * fj;
    }
    Matrix ut(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ut(i, j) = e.vectors(j, i);
    return SymMatrix(matmul(ud, ut));
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string serialize_matrix(const SymMatrix& m) {
    std::string out = std::to_string(m.dim());
    out += '\n';
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            if (j) out += ' ';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

SymMatrix parse_matrix(std::istream& in) {
    int dim = 0;
    if (!(in >> dim) || dim < 1) throw ParseError("matrix: bad dimension line");
    std::vector<double> entries(static_cast<size_t>(dim) * dim);
    for (auto& v : entries)
        if (!(in >> v)) throw ParseError("matrix: too few entries");
    return SymMatrix(dim, entries);
}

} // namespace erspar
