#include "qcl/spin.hpp"

#include <cmath>

namespace qcl {

SpinOperators build_spin_operators(Spin label) {
    const int n = label.dim();
    const double j = label.j();

    Mat jz = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
        jz(k, k) = j - k;

    Mat jplus = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double m = j - k; // raising from m to m+1
        jplus(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    const Mat jminus = jplus.adjoint();

    SpinOperators ops;
    ops.label = label;
    ops.jx = 0.5 * (jplus + jminus);
    ops.jy = Complex(0, -0.5) * (jplus - jminus);
    ops.jz = jz;
    return ops;
}

ControlSystem make_control_system(Mat h0, std::vector<Mat> controls) {
    const Eigen::Index n = h0.rows();
    if (n < 1 || h0.cols() != n)
        throw std::invalid_argument("ControlSystem: h0 must be square");
    if (!is_hermitian(h0, 1e-10))
        throw std::invalid_argument("ControlSystem: h0 is not Hermitian");
    if (controls.empty())
        throw std::invalid_argument("ControlSystem: needs at least one control Hamiltonian");
    for (const Mat& h : controls) {
        if (h.rows() != n || h.cols() != n)
            throw std::invalid_argument("ControlSystem: control dimension mismatch");
        if (!is_hermitian(h, 1e-10))
            throw std::invalid_argument("ControlSystem: control is not Hermitian");
    }
    return ControlSystem{std::move(h0), std::move(controls)};
}

LieClosureResult lie_closure(const std::vector<Mat>& generators, int max_dim, double rank_tol) {
    if (generators.empty())
        throw std::invalid_argument("lie_closure: no generators");
    const Eigen::Index n = generators.front().rows();
    const int full = static_cast<int>(n * n);
    if (max_dim < 0 || max_dim > full) max_dim = full;

    OperatorBasis basis = orthonormalize(generators, rank_tol); // validates skew-Hermiticity

    // Each productive round adds at least one dimension, so 2 N^2 rounds is
    // already generous; hitting the cap means numerical trouble, not physics.
    const int round_cap = 2 * full;
    int rounds = 0;
    bool grew = true;
    std::size_t processed = 0; // commutators of pairs below this index are already in
    while (grew && static_cast<int>(basis.size()) < max_dim) {
        if (++rounds > round_cap)
            throw LieClosureError("lie_closure: failed to stabilize within iteration cap",
                                  std::move(basis));
        grew = false;
        const std::size_t frozen = basis.size();
        for (std::size_t a = 0; a < frozen && static_cast<int>(basis.size()) < max_dim; ++a) {
            const std::size_t b0 = (a < processed) ? processed : a + 1;
            for (std::size_t b = b0; b < frozen && static_cast<int>(basis.size()) < max_dim; ++b) {
                Mat c = basis.elems[a] * basis.elems[b] - basis.elems[b] * basis.elems[a];
                for (int pass = 0; pass < 2; ++pass)
                    for (const Mat& e : basis.elems)
                        c -= hs_inner(e, c) * e;
                const double nrm = c.norm();
                if (nrm > rank_tol) {
                    basis.elems.push_back(c / nrm);
                    grew = true;
                }
            }
        }
        processed = frozen;
    }

    LieClosureResult out;
    out.dim = static_cast<int>(basis.size());
    out.rounds = rounds;

    // dimension of the closure modulo the identity direction
    const Mat id_dir = Mat::Identity(n, n) * Complex(0, 1) / std::sqrt(static_cast<double>(n));
    int traceless = 0;
    {
        OperatorBasis tl;
        tl.ambient_dim = n;
        tl.elems.push_back(id_dir);
        for (const Mat& e : basis.elems) {
            Mat w = e;
            for (int pass = 0; pass < 2; ++pass)
                for (const Mat& t : tl.elems)
                    w -= hs_inner(t, w) * t;
            if (w.norm() > rank_tol) {
                tl.elems.push_back(w / w.norm());
                ++traceless;
            }
        }
    }
    out.traceless_dim = traceless;
    out.controllable = traceless >= full - 1;
    out.basis = std::move(basis);
    return out;
}

LieClosureResult controllability(const ControlSystem& sys) {
    std::vector<Mat> gens;
    gens.reserve(sys.controls.size() + 1);
    gens.push_back(Complex(0, 1) * sys.h0);
    for (const Mat& h : sys.controls)
        gens.push_back(Complex(0, 1) * h);
    return lie_closure(gens);
}

std::vector<Spin> clebsch_gordan_labels(Spin j1, Spin j2) {
    std::vector<Spin> out;
    const int lo = std::abs(j1.two_j - j2.two_j);
    const int hi = j1.two_j + j2.two_j;
    for (int tj = lo; tj <= hi; tj += 2)
        out.push_back(Spin(tj));
    return out;
}

} // namespace qcl
