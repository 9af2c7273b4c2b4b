#pragma once

#include "qcl/characters.hpp"
#include "qcl/rng.hpp"
#include "qcl/spin.hpp"

namespace qcl {

/// Target unitary W with a realizability verdict relative to a symmetry
/// algebra. Construction by exponentiating an algebra element certifies
/// realizability; anything else starts out unverified (realizable = false)
/// until probe_realizable says otherwise.
struct TargetGate {
    Mat w;
    bool realizable = false;

    static TargetGate from_algebra_element(const OperatorBasis& algebra, const Mat& element);
    static TargetGate external(Mat w);

    Eigen::Index dim() const { return w.rows(); }
};

struct EulerPoint {
    double psi1 = 0.0, theta = 0.0, psi2 = 0.0;
};

/// e^{psi1 i Jz} e^{theta i Jx} e^{psi2 i Jz}
Mat euler_unitary(const SpinOperators& ops, const EulerPoint& p);

/// J(theta, phi) = N^{-1} |tr(W^dag e^{phi i Jz} e^{theta i Jx})| over
/// [0, 2pi)^2, for targets commuting with Jz (the psi1/psi2 dependence
/// collapses to phi = psi1 + psi2).
LandscapeGrid reduced_scan(const SpinOperators& ops, const TargetGate& w, int resolution);

/// Skew-Hermitian ascent generator of the modulus landscape:
/// D(U) = (e^{i phi} U^dag W - e^{-i phi} W^dag U) / (2N), phi = arg tr(W^dag U).
/// First-order: J(U e^{s A}) - J(U) = s <D(U), A> + O(s^2).
/// Reduces to (U^dag W - W^dag U)/(2N) when the trace is real positive.
Mat gate_gradient_generator(const Mat& u, const TargetGate& w);

/// Norm of the gradient generator projected onto the symmetry algebra;
/// vanishes exactly at landscape critical points restricted to the group.
double criticality_residual(const Mat& u, const TargetGate& w, const OperatorBasis& algebra);

struct AscentConfig {
    double residual_tol = 1e-8;
    int max_iterations = 100000;
    double initial_step_scale = 0.5; // eta0 = scale / |projected gradient|
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 60;
    bool record_trajectory = false;
    std::uint64_t kink_seed = 0x6b696e6bULL; // perturbation stream at modulus kinks
};

struct FlowResult {
    Mat start;
    Mat end;
    double final_J = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    int kink_restarts = 0;
    std::vector<double> j_trajectory; // accepted-step values when recorded
};

/// Riemannian gradient ascent U <- U exp(eta P_g D(U)) with backtracking
/// line search; accepted steps never decrease J. Ends when the projected
/// gradient norm falls below residual_tol or the iteration cap is hit
/// (converged = false, not an error).
FlowResult riemannian_ascent(const Mat& start, const TargetGate& w, const OperatorBasis& algebra,
                             const AscentConfig& cfg = {});

/// exp(t K) for a uniformly random unit direction K in the algebra and
/// t uniform in [0, max_hs_angle] (default 2 pi sqrt(N)).
Mat random_group_element(const OperatorBasis& algebra, Rng& rng, double max_hs_angle = -1.0);

/// Independent ascents from per-run derived seeds; order-stable.
std::vector<FlowResult> multi_start_ascent(const TargetGate& w, const OperatorBasis& algebra,
                                           int starts, std::uint64_t seed,
                                           const AscentConfig& cfg = {});

/// Realizability probe: ascent from `starts` random group seeds; W is
/// declared realizable iff some run reaches J > 1 - 1e-6.
bool probe_realizable(const Mat& w, const OperatorBasis& algebra, int starts = 32,
                      std::uint64_t seed = 2);

} // namespace qcl
