#ifndef ERSPAR_LINALG_HPP
#define ERSPAR_LINALG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "erspar/errors.hpp"

namespace erspar {

// Dense square matrix, row-major. Used for intermediates (products of
// symmetric matrices are generally asymmetric).
class Matrix {
public:
    Matrix() : dim_(0) {}
    explicit Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {}
    Matrix(int dim, std::vector<double> entries);

    static Matrix identity(int dim);

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const std::vector<double>& data() const { return a_; }

private:
    int dim_;
    std::vector<double> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix mat_sub(const Matrix& a, const Matrix& b);
Matrix mat_scale(const Matrix& a, double c);
double trace(const Matrix& m);
// m^j by repeated squaring, j >= 1.
Matrix mat_power(const Matrix& m, long j);
// Number of matrix multiplications mat_power performs for exponent j.
int mat_power_mult_count(long j);

// Dense symmetric real matrix. Symmetry is enforced on construction by
// averaging (a_ij + a_ji)/2 and holds exactly afterwards.
class SymMatrix {
public:
    SymMatrix() : dim_(0) {}
    explicit SymMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {}
    // Symmetrizes arbitrary row-major input by averaging.
    SymMatrix(int dim, const std::vector<double>& entries);
    explicit SymMatrix(const Matrix& m) : SymMatrix(m.dim(), m.data()) {}

    static SymMatrix identity(int dim);
    static SymMatrix diagonal(const std::vector<double>& d);

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    // Sets both (i,j) and (j,i).
    void set(int i, int j, double v);
    void add(int i, int j, double v);
    const std::vector<double>& data() const { return a_; }
    Matrix as_matrix() const;

    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator-(const SymMatrix& o) const;
    SymMatrix operator*(double c) const;

    double frobenius_norm() const;
    double max_abs() const;

private:
    int dim_;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values; // ascending
    Matrix vectors;             // orthonormal columns, vectors.col(i) <-> values[i]
};

// Full spectral decomposition by cyclic Jacobi rotations.
// Converges when the off-diagonal Frobenius norm drops below 1e-12 * ||M||_F;
// throws NoConvergence after 100 sweeps.
EigenDecomposition eigen_sym(const SymMatrix& m);
// Values-only variant (ascending), same iteration as eigen_sym but skips the
// eigenvector accumulation.
std::vector<double> eigenvalues_sym(const SymMatrix& m);

// Shared rank decision: |lambda| <= dim * eps_machine * max|lambda| is zero.
double zero_eigenvalue_threshold(int dim, const std::vector<double>& values);

SymMatrix pseudoinverse(const SymMatrix& m);
// Unique symmetric PSD square root. Eigenvalues in [-tol, 0) are clamped to 0;
// throws NotPSD below -1e-8 * ||M||.
SymMatrix psd_sqrt(const SymMatrix& m);
// (M^+)^{1/2} == (M^{1/2})^+.
SymMatrix pinv_sqrt(const SymMatrix& m);

// I - J where J has 1/n everywhere; the projection onto span(1)^perp.
SymMatrix projection_pi(int n);

double trace(const SymMatrix& m);
SymMatrix mat_power(const SymMatrix& m, long j);
double spectral_radius_sym(const SymMatrix& m);

// Decides (1-eps)B <= A <= (1+eps)B by checking the eigenvalues of
// B^{+/2} A B^{+/2} on the image of B against [1-eps-tol, 1+eps+tol],
// tol = 1e-9. Throws KernelMismatch when ker(A) != ker(B).
// Precomputes the B-side factorization once; check() can be reused
// against many candidates A.
class SpectralApproxChecker {
public:
    explicit SpectralApproxChecker(const SymMatrix& b);
    bool check(const SymMatrix& a, double eps) const;
    int nullity() const { return nullity_; }

private:
    int dim_;
    int nullity_;
    SymMatrix pinv_sqrt_b_;
    std::vector<std::vector<double>> kernel_basis_;
    double b_scale_;
};

bool spectral_approx_check(const SymMatrix& a, const SymMatrix& b, double eps);

// Test double for an approximate pseudoinverse oracle: returns a matrix with
// the eigenvectors of M^+ and each nonzero eigenvalue scaled by a factor in
// [1-gamma, 1+gamma] derived deterministically from noise_seed. Seed 0 is
// reserved and yields the exact pseudoinverse.
SymMatrix perturbed_pseudoinverse(const SymMatrix& m, double gamma, uint64_t noise_seed);

// Matrix text format: first line "dim", then dim whitespace-separated rows.
std::string serialize_matrix(const SymMatrix& m);
SymMatrix parse_matrix(std::istream& in);

} // namespace erspar

#endif
