#include "qcl/grape.hpp"

#include <algorithm>
#include <cmath>

namespace qcl {

namespace {

void check_dims(const ControlSystem& sys, const ControlField& field) {
    if (field.channels != static_cast<int>(sys.controls.size()))
        throw std::invalid_argument("field channel count does not match control Hamiltonians");
    if (field.steps < 1 || field.dt <= 0.0)
        throw std::invalid_argument("field must have steps >= 1 and dt > 0");
    if (field.amplitudes.rows() != field.channels || field.amplitudes.cols() != field.steps)
        throw std::invalid_argument("amplitude array shape mismatch");
    if (!field.amplitudes.allFinite())
        throw std::invalid_argument("amplitudes must be finite");
}

Mat step_hamiltonian(const ControlSystem& sys, const ControlField& field, int p) {
    Mat h = sys.h0;
    for (int k = 0; k < field.channels; ++k)
        h += field.amplitudes(k, p) * sys.controls[k];
    return h;
}

} // namespace

ControlField make_control_field(int channels, int steps, double dt) {
    if (channels < 1 || steps < 1 || dt <= 0.0)
        throw std::invalid_argument("make_control_field: need channels, steps >= 1 and dt > 0");
    ControlField f;
    f.channels = channels;
    f.steps = steps;
    f.dt = dt;
    f.amplitudes = Eigen::MatrixXd::Zero(channels, steps);
    return f;
}

PropagationResult propagate(const ControlSystem& sys, const ControlField& field, bool keep_steps) {
    check_dims(sys, field);
    const Eigen::Index n = sys.dim();
    PropagationResult out;
    if (keep_steps) out.step_propagators.reserve(field.steps);

    Mat u = Mat::Identity(n, n);
    for (int p = 0; p < field.steps; ++p) {
        const Mat up = expm_hermitian_times_i(step_hamiltonian(sys, field, p), -field.dt);
        if (keep_steps) out.step_propagators.push_back(up);
        u = up * u;
        if ((p & 255) == 255 && !is_unitary(u, 1e-9)) {
            Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = svd.matrixU() * svd.matrixV().adjoint();
        }
    }
    out.final_propagator = std::move(u);
    return out;
}

FidelityGradient fidelity_and_gradient(const ControlSystem& sys, const ControlField& field,
                                       const TargetGate& w) {
    check_dims(sys, field);
    const Eigen::Index n = sys.dim();
    if (w.w.rows() != n)
        throw std::invalid_argument("fidelity_and_gradient: target dimension mismatch");
    const int pcount = field.steps;
    const int m = field.channels;
    const double dt = field.dt;

    // per-step eigendecompositions and propagators
    std::vector<Eigen::SelfAdjointEigenSolver<Mat>> eig(pcount);
    std::vector<Mat> step(pcount);
    for (int p = 0; p < pcount; ++p) {
        eig[p].compute(step_hamiltonian(sys, field, p));
        if (eig[p].info() != Eigen::Success)
            throw NumericalError("fidelity_and_gradient: step eigendecomposition failed");
        Eigen::VectorXcd ph(n);
        for (Eigen::Index a = 0; a < n; ++a)
            ph(a) = std::polar(1.0, -dt * eig[p].eigenvalues()(a));
        step[p] = eig[p].eigenvectors() * ph.asDiagonal() * eig[p].eigenvectors().adjoint();
    }

    // prefix products L_p = U_p ... U_1 (L_{-1} = I) and suffixes S_p = U_P ... U_{p+1}
    std::vector<Mat> prefix(pcount);
    prefix[0] = step[0];
    for (int p = 1; p < pcount; ++p)
        prefix[p] = step[p] * prefix[p - 1];
    const Mat& u_final = prefix[pcount - 1];

    const Complex tr = (w.w.adjoint() * u_final).trace();
    if (std::abs(tr) < 1e-12)
        throw NonSmoothPointError("fidelity_and_gradient: tr(W^dag U) = 0");
    const Complex phase_conj = std::conj(tr / std::abs(tr));

    FidelityGradient out;
    out.fidelity = std::abs(tr) / static_cast<double>(n);
    out.gradient.resize(m, pcount);

    // Divided-difference factor for the Frechet derivative of e^{-i dt H}:
    // Phi_ab = (e^{mu_a} - e^{mu_b})/(mu_a - mu_b), mu_a = -i dt lambda_a.
    Mat suffix = Mat::Identity(n, n);
    for (int p = pcount - 1; p >= 0; --p) {
        const Mat mp = (p > 0) ? Mat(prefix[p - 1] * w.w.adjoint() * suffix)
                               : Mat(w.w.adjoint() * suffix);
        const Mat& v = eig[p].eigenvectors();
        const Eigen::VectorXd& lam = eig[p].eigenvalues();

        Mat phi(n, n);
        for (Eigen::Index a = 0; a < n; ++a) {
            const Complex ea = std::polar(1.0, -dt * lam(a));
            for (Eigen::Index b = 0; b < n; ++b) {
                const double dl = lam(a) - lam(b);
                if (std::abs(dl) * dt < 1e-9) {
                    // coincident eigenvalues: limit e^{mu_a} (with midpoint phase)
                    phi(a, b) = std::polar(1.0, -dt * 0.5 * (lam(a) + lam(b)));
                } else {
                    const Complex eb = std::polar(1.0, -dt * lam(b));
                    phi(a, b) = (ea - eb) / Complex(0, -dt * dl);
                }
            }
        }

        const Mat g = v.adjoint() * mp * v; // trace partner in the eigenbasis
        for (int k = 0; k < m; ++k) {
            const Mat a = v.adjoint() * (Complex(0, -dt) * sys.controls[k]) * v;
            Complex acc(0, 0);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    acc += g(c, r) * phi(r, c) * a(r, c);
            out.gradient(k, p) = (phase_conj * acc).real() / static_cast<double>(n);
        }
        suffix = suffix * step[p];
    }
    return out;
}

std::vector<GrapeOutcome> run_grape(const ControlSystem& sys, const TargetGate& w,
                                    const GrapeConfig& cfg) {
    if (cfg.starts < 1)
        throw std::invalid_argument("run_grape: starts must be >= 1");
    std::vector<GrapeOutcome> outcomes;
    outcomes.reserve(cfg.starts);
    Rng master(cfg.seed);

    const int m = static_cast<int>(sys.controls.size());
    for (int s = 0; s < cfg.starts; ++s) {
        Rng rng = master.child(s);
        ControlField field = make_control_field(m, cfg.steps, cfg.dt);
        for (int k = 0; k < m; ++k)
            for (int p = 0; p < cfg.steps; ++p)
                field.amplitudes(k, p) = rng.uniform(-cfg.amp_init_range, cfg.amp_init_range);

        GrapeOutcome o;
        const int stride = std::max(1, cfg.max_iterations / std::max(1, cfg.trajectory_samples));

        double eta_prev = 0.0;
        FidelityGradient fg;
        int it = 0;
        while (it < cfg.max_iterations) {
            bool at_kink = false;
            try {
                fg = fidelity_and_gradient(sys, field, w);
            } catch (const NonSmoothPointError&) {
                at_kink = true;
            }
            if (at_kink) {
                for (int k = 0; k < m; ++k)
                    for (int p = 0; p < cfg.steps; ++p)
                        field.amplitudes(k, p) += 1e-6 * rng.normal();
                ++o.kink_restarts;
                ++it;
                continue;
            }
            const double gn = fg.gradient.norm();
            o.gradient_norm = gn;
            o.final_J = fg.fidelity;
            if (gn < cfg.grad_tol) {
                o.converged = true;
                break;
            }

            double eta = (eta_prev > 0.0) ? 2.0 * eta_prev : 1.0 / gn;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                ControlField trial = field;
                trial.amplitudes += eta * fg.gradient;
                if (cfg.amp_bound > 0.0)
                    trial.amplitudes =
                        trial.amplitudes.cwiseMax(-cfg.amp_bound).cwiseMin(cfg.amp_bound);
                const double j2 =
                    std::abs((w.w.adjoint() * propagate(sys, trial).final_propagator).trace()) /
                    static_cast<double>(sys.dim());
                if (j2 >= fg.fidelity + 1e-4 * eta * gn * gn) {
                    field = std::move(trial);
                    o.final_J = j2;
                    eta_prev = eta;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) break; // no measurable ascent at this precision
            ++it;
            if (it % stride == 0) o.trajectory.push_back(o.final_J);
        }
        o.iterations = it;
        o.trajectory.push_back(o.final_J);
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

TrapStatistics trap_statistics(const std::vector<GrapeOutcome>& outcomes,
                               std::vector<double> reference_values, double band) {
    if (outcomes.empty())
        throw std::invalid_argument("trap_statistics: no outcomes");
    if (reference_values.empty())
        throw std::invalid_argument("trap_statistics: no reference values");
    std::sort(reference_values.begin(), reference_values.end());

    TrapStatistics st;
    st.reference = reference_values;
    st.counts.assign(reference_values.size(), 0);
    st.total = static_cast<int>(outcomes.size());

    const double global = reference_values.back();
    int trapped = 0;
    for (const auto& o : outcomes) {
        int best = -1;
        double best_d = band;
        for (std::size_t r = 0; r < reference_values.size(); ++r) {
            const double d = std::abs(o.final_J - reference_values[r]);
            if (d <= best_d) {
                best_d = d;
                best = static_cast<int>(r);
            }
        }
        if (best < 0) {
            ++st.unassigned;
        } else {
            ++st.counts[best];
            if (std::abs(reference_values[best] - global) > 1e-9) ++trapped;
        }
    }
    st.trapped_fraction = static_cast<double>(trapped) / st.total;
    st.unassigned_fraction = static_cast<double>(st.unassigned) / st.total;
    return st;
}

} // namespace qcl
