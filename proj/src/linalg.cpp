#include "qcl/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qcl {

namespace {

void require_square(const Mat& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
}

void require_finite(const Mat& m, const char* who) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

} // namespace

bool is_unitary(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).norm() < tol;
}

bool is_hermitian(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() < tol;
}

bool is_skew_hermitian(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m + m.adjoint()).norm() < tol;
}

bool is_zero_trace(const Mat& m, double tol) {
    return std::abs(m.trace()) < tol;
}

double hs_inner(const Mat& x, const Mat& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("hs_inner: dimension mismatch");
    return (x.adjoint() * y).trace().real();
}

double hs_norm(const Mat& x) { return x.norm(); }

Mat expm_hermitian_times_i(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("expm: Hermitian eigendecomposition failed");
    const Eigen::VectorXd& w = es.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::polar(1.0, t * w(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm(const Mat& a) {
    require_square(a, "expm");
    require_finite(a, "expm");
    const double scale = std::max(1.0, a.norm());
    if (is_skew_hermitian(a, 1e-12 * scale)) {
        // a = iH with H Hermitian
        const Mat h = Complex(0, -1) * a;
        return expm_hermitian_times_i(h, 1.0);
    }
    if (is_hermitian(a, 1e-12 * scale)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(a);
        Eigen::VectorXcd ew(es.eigenvalues().size());
        for (Eigen::Index k = 0; k < ew.size(); ++k)
            ew(k) = std::exp(es.eigenvalues()(k));
        return es.eigenvectors() * ew.asDiagonal() * es.eigenvectors().adjoint();
    }
    return a.exp();
}

OperatorBasis orthonormalize(const std::vector<Mat>& spanning_set, double rank_tol) {
    OperatorBasis basis;
    if (spanning_set.empty()) return basis;

    const Eigen::Index n = spanning_set.front().rows();
    basis.ambient_dim = n;
    for (const Mat& x : spanning_set) {
        if (x.rows() != n || x.cols() != n)
            throw std::invalid_argument("orthonormalize: mixed dimensions in spanning set");
        const double scale = std::max(1.0, x.norm());
        if (!is_skew_hermitian(x, 1e-8 * scale))
            throw std::invalid_argument("orthonormalize: element is not skew-Hermitian");
    }

    for (const Mat& x : spanning_set) {
        Mat w = 0.5 * (x - x.adjoint()); // scrub Hermitian round-off
        // two Gram-Schmidt passes keep the Gram matrix at identity to ~1e-15
        for (int pass = 0; pass < 2; ++pass)
            for (const Mat& e : basis.elems)
                w -= hs_inner(e, w) * e;
        const double nrm = w.norm();
        if (nrm > rank_tol)
            basis.elems.push_back(w / nrm);
    }
    return basis;
}

Mat project(const Mat& x, const OperatorBasis& basis) {
    if (basis.empty()) {
        require_square(x, "project");
        return Mat::Zero(x.rows(), x.cols());
    }
    if (x.rows() != basis.ambient_dim || x.cols() != basis.ambient_dim)
        throw std::invalid_argument("project: dimension mismatch with basis");
    Mat out = Mat::Zero(x.rows(), x.cols());
    for (const Mat& e : basis.elems)
        out += hs_inner(e, x) * e;
    return out;
}

} // namespace qcl
