#pragma once

#include "qcl/kinematic.hpp"
#include "qcl/spin.hpp"

namespace qcl {

/// Piecewise-constant control amplitudes: channels x steps, step length dt.
struct ControlField {
    int channels = 0;
    int steps = 0;
    double dt = 0.0;
    Eigen::MatrixXd amplitudes; // channels x steps

    double t_final() const { return steps * dt; }
};

ControlField make_control_field(int channels, int steps, double dt);

struct PropagationResult {
    Mat final_propagator;
    std::vector<Mat> step_propagators; // filled when keep_steps is requested
};

/// U(t_f) = prod_{p=P..1} exp(-i dt (H0 + sum_k eps_k[p] H_k)); exact for
/// piecewise-constant fields since every step is a closed-form exponential.
PropagationResult propagate(const ControlSystem& sys, const ControlField& field,
                            bool keep_steps = false);

struct FidelityGradient {
    double fidelity = 0.0;
    Eigen::MatrixXd gradient; // channels x steps
};

/// J = N^{-1}|tr(W^dag U(t_f))| and its exact per-amplitude derivatives via
/// the spectral rule for each step exponential (no finite-dt approximation).
FidelityGradient fidelity_and_gradient(const ControlSystem& sys, const ControlField& field,
                                       const TargetGate& w);

struct GrapeConfig {
    int starts = 1;
    int steps = 64;
    double dt = 0.1;
    double amp_init_range = 1.0; // initial amplitudes uniform in +-range
    double amp_bound = 0.0;      // 0 disables the bound
    double grad_tol = 1e-7;
    int max_iterations = 5000;
    std::uint64_t seed = 1;
    int trajectory_samples = 64;
};

struct GrapeOutcome {
    double final_J = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int kink_restarts = 0;
    std::vector<double> trajectory; // sampled accepted-step J values
};

/// Multi-start gradient ascent over the control amplitudes; one outcome per
/// start, deterministic per seed, order-stable.
std::vector<GrapeOutcome> run_grape(const ControlSystem& sys, const TargetGate& w,
                                    const GrapeConfig& cfg);

struct TrapStatistics {
    std::vector<double> reference; // sorted reference plateau values
    std::vector<int> counts;       // outcomes assigned to each reference value
    int total = 0;
    int unassigned = 0;
    double trapped_fraction = 0.0;    // assigned to non-global reference values
    double unassigned_fraction = 0.0; // outside every tolerance band
};

/// Histogram of final fidelities against reference critical values
/// (tolerance band 2e-3 by default).
TrapStatistics trap_statistics(const std::vector<GrapeOutcome>& outcomes,
                               std::vector<double> reference_values, double band = 2e-3);

} // namespace qcl
