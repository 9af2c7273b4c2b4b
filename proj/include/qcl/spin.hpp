#pragma once

#include "qcl/linalg.hpp"

#include <vector>

namespace qcl {

/// Half-integer spin stored as two_j to keep arithmetic exact.
struct Spin {
    int two_j = 0;

    Spin() = default;
    explicit Spin(int tj) : two_j(tj) {
        if (tj < 0) throw std::invalid_argument("Spin: two_j must be >= 0");
    }
    static Spin from_two_j(int tj) { return Spin(tj); }

    double j() const { return 0.5 * two_j; }
    int dim() const { return two_j + 1; }
    bool integer() const { return two_j % 2 == 0; }
    int floor_j() const { return two_j / 2; }
};

/// Angular momentum matrices in the standard |j,m> basis ordered
/// m = j, j-1, ..., -j (hbar = 1).
struct SpinOperators {
    Spin label;
    Mat jx, jy, jz;
};

/// jz diagonal, ladder matrix elements <m+1|J+|m> = sqrt(j(j+1)-m(m+1)),
/// jx = (J+ + J-)/2, jy = (J+ - J-)/(2i).
SpinOperators build_spin_operators(Spin label);

/// Drift plus control Hamiltonians, all Hermitian and of equal dimension.
struct ControlSystem {
    Mat h0;
    std::vector<Mat> controls;

    Eigen::Index dim() const { return h0.rows(); }
};

/// Validates Hermiticity (1e-10), matching dimensions, non-empty controls.
ControlSystem make_control_system(Mat h0, std::vector<Mat> controls);

struct LieClosureResult {
    OperatorBasis basis;     // orthonormal basis of the dynamical algebra
    int dim = 0;             // dim over the reals
    int traceless_dim = 0;   // dim after removing the identity component
    bool controllable = false;
    int rounds = 0;
};

/// Thrown if commutator generation fails to stabilize within the round cap.
struct LieClosureError : NumericalError {
    LieClosureError(const std::string& msg, OperatorBasis partial_basis)
        : NumericalError(msg), partial(std::move(partial_basis)) {}
    OperatorBasis partial;
};

/// Repeated commutators of skew-Hermitian generators until the spanned
/// dimension stabilizes. Controllable iff the closure spans su(N) modulo the
/// identity direction, i.e. traceless_dim >= N^2 - 1.
LieClosureResult lie_closure(const std::vector<Mat>& generators, int max_dim = -1,
                             double rank_tol = 1e-9);

/// Closure of the system algebra spanned by {i h0, i h_k}.
LieClosureResult controllability(const ControlSystem& sys);

/// Decomposition labels of D_{j1} (x) D_{j2} = (+)_j D_j:
/// j = |j1-j2|, ..., j1+j2.
std::vector<Spin> clebsch_gordan_labels(Spin j1, Spin j2);

} // namespace qcl
