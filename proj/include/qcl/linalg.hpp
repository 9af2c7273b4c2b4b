#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcl {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Numerical failure distinct from invalid input; the CLI maps
// std::invalid_argument to exit code 1 and NumericalError to exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised where the modulus objective |tr(W^dag U)| is non-differentiable.
struct NonSmoothPointError : NumericalError {
    using NumericalError::NumericalError;
};

bool is_unitary(const Mat& m, double tol);
bool is_hermitian(const Mat& m, double tol);
bool is_skew_hermitian(const Mat& m, double tol);
bool is_zero_trace(const Mat& m, double tol);

/// Hilbert-Schmidt inner product Re tr(X^dag Y). Real bilinear form under
/// which the skew-Hermitian matrices form a real vector space.
double hs_inner(const Mat& x, const Mat& y);

double hs_norm(const Mat& x);

/// Matrix exponential e^A.
///
/// Skew-Hermitian (and Hermitian) inputs go through a self-adjoint
/// eigendecomposition, so unitarity of e^A is exact to rounding for
/// skew-Hermitian A. Other square inputs fall back to scaling-and-squaring.
Mat expm(const Mat& a);

/// e^{i t H} for Hermitian H; the workhorse for propagators, returns the
/// eigensolver decomposition on request so step gradients can reuse it.
Mat expm_hermitian_times_i(const Mat& h, double t);

/// Orthonormal basis of a real subspace of skew-Hermitian matrices under
/// hs_inner. Elements satisfy is_skew_hermitian(1e-10) and have an identity
/// Gram matrix to within 1e-10.
struct OperatorBasis {
    Eigen::Index ambient_dim = 0;
    std::vector<Mat> elems;

    std::size_t size() const { return elems.size(); }
    bool empty() const { return elems.empty(); }
};

/// Gram-Schmidt over hs_inner. Inputs must be skew-Hermitian (within 1e-8);
/// elements whose residual falls below rank_tol are discarded, so the output
/// size equals the numerical rank of the spanning set.
OperatorBasis orthonormalize(const std::vector<Mat>& spanning_set, double rank_tol = 1e-9);

/// Orthogonal projection sum_k <E_k, X> E_k onto the span of the basis.
Mat project(const Mat& x, const OperatorBasis& basis);

} // namespace qcl
