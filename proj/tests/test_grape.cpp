#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcl/grape.hpp"
#include "qcl/topology.hpp"

#include <cmath>
#include <numbers>

using namespace qcl;

namespace {

constexpr double PI = std::numbers::pi;

ControlSystem spin_system(int two_j) {
    const auto ops = build_spin_operators(Spin(two_j));
    return make_control_system(ops.jz, {ops.jx, ops.jy});
}

Mat random_hermitian(Eigen::Index n, Rng& rng) {
    Mat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = Complex(rng.normal(), rng.normal());
    return 0.5 * (m + m.adjoint());
}

ControlField random_field(int channels, int steps, double dt, Rng& rng, double range = 1.0) {
    ControlField f = make_control_field(channels, steps, dt);
    for (int k = 0; k < channels; ++k)
        for (int p = 0; p < steps; ++p)
            f.amplitudes(k, p) = rng.uniform(-range, range);
    return f;
}

double fidelity_of(const ControlSystem& sys, const ControlField& f, const Mat& w) {
    return std::abs((w.adjoint() * propagate(sys, f).final_propagator).trace()) /
           static_cast<double>(sys.dim());
}

} // namespace

TEST_CASE("propagate: trivial cases") {
    const auto ops = build_spin_operators(Spin(1));
    const auto sys_free = make_control_system(Mat::Zero(2, 2), {ops.jx});
    const auto zero_field = make_control_field(1, 8, 0.5);
    CHECK((propagate(sys_free, zero_field).final_propagator - Mat::Identity(2, 2)).norm() <
          1e-13);

    // free precession over t_f = 2 pi: e^{-2 pi i jz} = -I for spin 1/2
    const auto sys = make_control_system(ops.jz, {ops.jx});
    const auto field = make_control_field(1, 16, 2.0 * PI / 16.0);
    CHECK((propagate(sys, field).final_propagator + Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("propagate matches a fine-step oracle") {
    Rng rng(51);
    const auto sys = spin_system(4); // j = 2
    const auto field = random_field(2, 12, 0.31, rng);

    ControlField fine = make_control_field(2, 12 * 100, 0.31 / 100.0);
    for (int k = 0; k < 2; ++k)
        for (int p = 0; p < 12 * 100; ++p)
            fine.amplitudes(k, p) = field.amplitudes(k, p / 100);

    const Mat a = propagate(sys, field).final_propagator;
    const Mat b = propagate(sys, fine).final_propagator;
    CHECK((a - b).norm() < 1e-9);
    CHECK(is_unitary(a, 1e-11));
}

TEST_CASE("propagate keeps unitarity over ten thousand steps") {
    Rng rng(52);
    const auto sys = spin_system(6);
    const auto field = random_field(2, 10000, 0.05, rng);
    CHECK(is_unitary(propagate(sys, field).final_propagator, 1e-9));
}

TEST_CASE("propagate validates dimensions") {
    const auto sys = spin_system(2);
    CHECK_THROWS_AS(propagate(sys, make_control_field(1, 4, 0.1)), std::invalid_argument);
    auto f = make_control_field(2, 4, 0.1);
    f.amplitudes(0, 0) = std::nan("");
    CHECK_THROWS_AS(propagate(sys, f), std::invalid_argument);
}

TEST_CASE("gradient vanishes at an exactly reachable target") {
    Rng rng(53);
    const auto sys = spin_system(4);
    const auto field = random_field(2, 10, 0.4, rng);
    const TargetGate w = TargetGate::external(propagate(sys, field).final_propagator);
    const auto fg = fidelity_and_gradient(sys, field, w);
    CHECK(fg.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fg.gradient.norm() < 1e-8);
}

TEST_CASE("gradient matches central finite differences on random instances") {
    Rng rng(54);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 7); // N <= 8
        const int m = 1 + static_cast<int>(rng.uniform() * 2);
        const int steps = 3 + static_cast<int>(rng.uniform() * 6);
        std::vector<Mat> controls;
        for (int k = 0; k < m; ++k)
            controls.push_back(random_hermitian(n, rng));
        const auto sys = make_control_system(random_hermitian(n, rng), std::move(controls));
        const auto field = random_field(m, steps, rng.uniform(0.05, 0.5), rng);
        Mat wm(n, n);
        {
            Mat g(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    g(r, c) = Complex(rng.normal(), rng.normal());
            wm = expm(0.5 * (g - g.adjoint()));
        }
        const TargetGate w = TargetGate::external(wm);

        const auto fg = fidelity_and_gradient(sys, field, w);
        const double h = 1e-5;
        for (int probe = 0; probe < 6; ++probe) {
            const int k = static_cast<int>(rng.uniform() * m);
            const int p = static_cast<int>(rng.uniform() * steps);
            ControlField fp = field, fm = field;
            fp.amplitudes(k, p) += h;
            fm.amplitudes(k, p) -= h;
            const double fd = (fidelity_of(sys, fp, wm) - fidelity_of(sys, fm, wm)) / (2 * h);
            const double scale = std::max({std::abs(fd), fg.gradient.norm(), 1e-6});
            worst = std::max(worst, std::abs(fd - fg.gradient(k, p)) / scale);
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("fidelity and gradient are invariant under a global target phase") {
    Rng rng(55);
    const auto sys = spin_system(4);
    const auto field = random_field(2, 8, 0.3, rng);
    const Mat w0 = propagate(sys, random_field(2, 8, 0.35, rng)).final_propagator;

    const auto a = fidelity_and_gradient(sys, field, TargetGate::external(w0));
    const auto b = fidelity_and_gradient(
        sys, field, TargetGate::external(std::polar(1.0, 1.234) * w0));
    CHECK(a.fidelity == doctest::Approx(b.fidelity).epsilon(1e-12));
    CHECK((a.gradient - b.gradient).norm() < 1e-12);
}

TEST_CASE("dynamics confined to the symmetry group: class-angle cross-check") {
    Rng rng(56);
    const auto sys3 = spin_system(6);  // j = 3
    const auto sys_half = spin_system(1);
    for (int t = 0; t < 20; ++t) {
        const auto f = random_field(2, 24, 0.21, rng);
        const Mat u7 = propagate(sys3, f).final_propagator;
        const Mat u2 = propagate(sys_half, f).final_propagator;
        // u2 in SU(2): eigenphases +-beta with tr = 2 cos(beta)
        const double beta = std::acos(std::clamp(u2.trace().real() / 2.0, -1.0, 1.0));
        const double from_char = fidelity_from_character(Irrep::su2(Spin(6)), TorusPoint(beta));
        CHECK(std::abs(std::abs(u7.trace()) / 7.0 - from_char) < 1e-8);
    }
}

TEST_CASE("run_grape: spin-1/2 always reaches a reachable gate") {
    const auto sys = spin_system(1);
    const auto ops = build_spin_operators(Spin(1));
    const Complex i(0, 1);
    const TargetGate w =
        TargetGate::external(expm(i * (0.9 * ops.jx - 0.4 * ops.jy + 0.3 * ops.jz)));

    GrapeConfig cfg;
    cfg.starts = 50;
    cfg.steps = 24;
    cfg.dt = 0.5;
    cfg.seed = 4;
    const auto outcomes = run_grape(sys, w, cfg);
    REQUIRE(outcomes.size() == 50);
    for (const auto& o : outcomes)
        CHECK(o.final_J > 1.0 - 1e-6);
}

TEST_CASE("run_grape: trajectories are monotone and deterministic per seed") {
    const auto sys = spin_system(2);
    const TargetGate w = TargetGate::external(Mat::Identity(3, 3));
    GrapeConfig cfg;
    cfg.starts = 4;
    cfg.steps = 16;
    cfg.dt = 0.4;
    cfg.seed = 11;
    cfg.max_iterations = 400;

    const auto a = run_grape(sys, w, cfg);
    const auto b = run_grape(sys, w, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].final_J == b[k].final_J); // bit-for-bit
        CHECK(a[k].iterations == b[k].iterations);
        for (std::size_t s = 1; s < a[k].trajectory.size(); ++s)
            CHECK(a[k].trajectory[s] >= a[k].trajectory[s - 1] - 1e-15);
    }
}

TEST_CASE("run_grape: spin-3 plateaus cluster on kinematic critical values") {
    const auto sys = spin_system(6);
    const TargetGate w = TargetGate::external(Mat::Identity(7, 7));
    GrapeConfig cfg;
    cfg.starts = 24;
    cfg.steps = 64;
    cfg.dt = 70.0 / 64.0;
    cfg.seed = 21;
    cfg.max_iterations = 4000;
    const auto outcomes = run_grape(sys, w, cfg);

    const auto values = critical_values(critical_points_su2(Spin(6)));
    const auto st = trap_statistics(outcomes, values);
    CHECK(st.unassigned_fraction <= 0.15);
    CHECK(st.trapped_fraction > 0.0);
}

TEST_CASE("run_grape: breaking the symmetry removes the traps") {
    const auto ops = build_spin_operators(Spin(6));
    const auto sys = make_control_system(ops.jz + ops.jz * ops.jz, {ops.jx, ops.jy});
    CHECK(controllability(sys).controllable);

    const TargetGate w = TargetGate::external(Mat::Identity(7, 7));
    GrapeConfig cfg;
    cfg.starts = 8;
    cfg.steps = 64;
    cfg.dt = 20.0 / 64.0;
    cfg.seed = 31;
    cfg.max_iterations = 4000;
    cfg.grad_tol = 1e-7;
    for (const auto& o : run_grape(sys, w, cfg))
        CHECK(o.final_J > 1.0 - 1e-3);
}

TEST_CASE("trap_statistics bookkeeping") {
    const auto mk = [](double v) {
        GrapeOutcome o;
        o.final_J = v;
        return o;
    };
    const auto st =
        trap_statistics({mk(1.0), mk(0.43), mk(0.43)}, {1.0, 0.43});
    CHECK(st.trapped_fraction == doctest::Approx(2.0 / 3.0));
    CHECK(st.unassigned == 0);

    const auto st2 = trap_statistics({mk(1.0), mk(1.0)}, {1.0});
    CHECK(st2.trapped_fraction == 0.0);

    const auto st3 = trap_statistics({mk(0.5)}, {1.0});
    CHECK(st3.unassigned_fraction == 1.0);

    CHECK_THROWS_AS(trap_statistics({}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(trap_statistics({mk(1.0)}, {}), std::invalid_argument);
}
