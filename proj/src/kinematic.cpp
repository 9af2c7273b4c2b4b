#include "qcl/kinematic.hpp"

#include <cmath>
#include <numbers>

namespace qcl {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;

void require_unitary(const Mat& u, const char* who) {
    if (!is_unitary(u, 1e-8))
        throw std::invalid_argument(std::string(who) + ": matrix is not unitary");
}

double gate_fidelity(const Mat& u, const Mat& w) {
    return std::abs((w.adjoint() * u).trace()) / u.rows();
}

} // namespace

TargetGate TargetGate::from_algebra_element(const OperatorBasis& algebra, const Mat& element) {
    const Mat in_algebra = project(element, algebra);
    if ((in_algebra - element).norm() > 1e-8)
        throw std::invalid_argument("TargetGate: element does not lie in the algebra");
    TargetGate t;
    t.w = expm(element);
    t.realizable = true; // constructive certificate
    return t;
}

TargetGate TargetGate::external(Mat w) {
    require_unitary(w, "TargetGate");
    TargetGate t;
    t.w = std::move(w);
    t.realizable = false;
    return t;
}

Mat euler_unitary(const SpinOperators& ops, const EulerPoint& p) {
    const Complex i(0, 1);
    return expm(p.psi1 * i * ops.jz) * expm(p.theta * i * ops.jx) * expm(p.psi2 * i * ops.jz);
}

LandscapeGrid reduced_scan(const SpinOperators& ops, const TargetGate& w, int resolution) {
    if (resolution < 64)
        throw std::invalid_argument("reduced_scan: resolution must be >= 64");
    const Eigen::Index n = ops.jz.rows();
    if (w.w.rows() != n)
        throw std::invalid_argument("reduced_scan: target dimension mismatch");
    if ((w.w * ops.jz - ops.jz * w.w).norm() > 1e-10)
        throw std::invalid_argument(
            "reduced_scan: target must commute with Jz ([W, Jz] != 0 violates the "
            "two-angle reduction)");

    // e^{phi i Jz} is diagonal, so tr(W^dag D(phi) B(theta)) collapses to a
    // length-N sum once the theta factor is formed: much cheaper than a
    // dense product per grid node.
    Eigen::SelfAdjointEigenSolver<Mat> es(ops.jx);
    if (es.info() != Eigen::Success)
        throw NumericalError("reduced_scan: Jx eigendecomposition failed");
    const Mat& vx = es.eigenvectors();
    const Eigen::VectorXd& dx = es.eigenvalues();

    LandscapeGrid grid;
    grid.label = Irrep::su2(ops.label);
    grid.resolution = resolution;
    grid.axis_names = {"theta", "phi"};
    grid.axis1.resize(resolution);
    grid.axis2.resize(resolution);
    for (int k = 0; k < resolution; ++k)
        grid.axis1[k] = grid.axis2[k] = TWO_PI * k / resolution;
    grid.values.resize(static_cast<std::size_t>(resolution) * resolution);

    const Mat wdag = w.w.adjoint();
    Eigen::VectorXcd phases(n);
    for (int it = 0; it < resolution; ++it) {
        const double theta = grid.axis1[it];
        for (Eigen::Index a = 0; a < n; ++a)
            phases(a) = std::polar(1.0, theta * dx(a));
        const Mat b = vx * phases.asDiagonal() * vx.adjoint();
        const Mat bw = b * wdag; // g_m = (B W^dag)_{mm}
        for (int ip = 0; ip < resolution; ++ip) {
            const double phi = grid.axis2[ip];
            Complex tr(0, 0);
            for (Eigen::Index m = 0; m < n; ++m)
                tr += std::polar(1.0, phi * ops.jz(m, m).real()) * bw(m, m);
            grid.values[static_cast<std::size_t>(it) * resolution + ip] =
                std::abs(tr) / static_cast<double>(n);
        }
    }
    return grid;
}

Mat gate_gradient_generator(const Mat& u, const TargetGate& w) {
    require_unitary(u, "gate_gradient_generator");
    if (u.rows() != w.w.rows())
        throw std::invalid_argument("gate_gradient_generator: dimension mismatch");
    const Complex tr = (w.w.adjoint() * u).trace();
    if (std::abs(tr) < 1e-12)
        throw NonSmoothPointError("gate_gradient_generator: tr(W^dag U) = 0, modulus landscape "
                                  "is not differentiable here");
    const Complex phase = tr / std::abs(tr);
    const double n = static_cast<double>(u.rows());
    return (phase * (u.adjoint() * w.w) - std::conj(phase) * (w.w.adjoint() * u)) / (2.0 * n);
}

double criticality_residual(const Mat& u, const TargetGate& w, const OperatorBasis& algebra) {
    return project(gate_gradient_generator(u, w), algebra).norm();
}

FlowResult riemannian_ascent(const Mat& start, const TargetGate& w, const OperatorBasis& algebra,
                             const AscentConfig& cfg) {
    require_unitary(start, "riemannian_ascent");
    FlowResult res;
    res.start = start;

    Mat u = start;
    double J = gate_fidelity(u, w.w);
    if (cfg.record_trajectory) res.j_trajectory.push_back(J);
    Rng kink_rng(cfg.kink_seed);

    int it = 0;
    double residual = 0.0;
    bool converged = false;
    int accepted_since_renorm = 0;
    while (it < cfg.max_iterations) {
        Complex tr = (w.w.adjoint() * u).trace();
        if (std::abs(tr) < 1e-12) {
            // modulus kink: nudge off the measure-zero set and continue
            Mat xi = Mat::Zero(u.rows(), u.cols());
            for (const Mat& e : algebra.elems)
                xi += kink_rng.normal() * e;
            if (xi.norm() > 0) xi *= 1e-3 / xi.norm();
            u = u * expm(xi);
            ++res.kink_restarts;
            J = gate_fidelity(u, w.w);
            continue;
        }
        const Mat g = project(gate_gradient_generator(u, w), algebra);
        residual = g.norm();
        if (residual < cfg.residual_tol) {
            converged = true;
            break;
        }

        double eta = cfg.initial_step_scale / residual;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            const Mat trial = u * expm(eta * g);
            const double J2 = gate_fidelity(trial, w.w);
            if (J2 >= J + cfg.armijo_c * eta * residual * residual) {
                u = trial;
                J = J2;
                accepted = true;
                break;
            }
            eta *= cfg.backtrack_factor;
        }
        if (!accepted) break; // no measurable ascent left at this precision
        ++it;
        if (cfg.record_trajectory) res.j_trajectory.push_back(J);
        if (++accepted_since_renorm >= 128) {
            accepted_since_renorm = 0;
            if (!is_unitary(u, 1e-11)) {
                Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
                u = svd.matrixU() * svd.matrixV().adjoint();
                J = gate_fidelity(u, w.w);
            }
        }
    }

    if (!is_unitary(u, 1e-10)) {
        Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
        u = svd.matrixU() * svd.matrixV().adjoint();
        J = gate_fidelity(u, w.w);
    }

    res.end = u;
    res.final_J = J;
    res.iterations = it;
    res.residual = residual;
    res.converged = converged;
    return res;
}

Mat random_group_element(const OperatorBasis& algebra, Rng& rng, double max_hs_angle) {
    if (algebra.empty())
        throw std::invalid_argument("random_group_element: empty algebra");
    const Eigen::Index n = algebra.ambient_dim;
    if (max_hs_angle <= 0.0)
        max_hs_angle = TWO_PI * std::sqrt(static_cast<double>(n));
    Mat k = Mat::Zero(n, n);
    for (const Mat& e : algebra.elems)
        k += rng.normal() * e;
    const double nrm = k.norm();
    if (nrm < 1e-14) return Mat::Identity(n, n);
    return expm((rng.uniform(0.0, max_hs_angle) / nrm) * k);
}

std::vector<FlowResult> multi_start_ascent(const TargetGate& w, const OperatorBasis& algebra,
                                           int starts, std::uint64_t seed,
                                           const AscentConfig& cfg) {
    if (starts < 1)
        throw std::invalid_argument("multi_start_ascent: starts must be >= 1");
    std::vector<FlowResult> out;
    out.reserve(starts);
    Rng master(seed);
    for (int s = 0; s < starts; ++s) {
        Rng run_rng = master.child(s);
        AscentConfig run_cfg = cfg;
        run_cfg.kink_seed = run_rng.next_u64();
        out.push_back(riemannian_ascent(random_group_element(algebra, run_rng), w, algebra,
                                        run_cfg));
    }
    return out;
}

bool probe_realizable(const Mat& w, const OperatorBasis& algebra, int starts, std::uint64_t seed) {
    const TargetGate t = TargetGate::external(w);
    for (const auto& r : multi_start_ascent(t, algebra, starts, seed))
        if (r.final_J > 1.0 - 1e-6) return true;
    return false;
}

} // namespace qcl
