#include "qcl/topology.hpp"

#include "qcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qcl {

namespace {

constexpr double PI = std::numbers::pi;
constexpr double TWO_PI = 2.0 * std::numbers::pi;

// chi and derivatives for SU(2), valid away from sin(b) = 0
struct Su2Chi {
    int n;
    double chi(double b) const { return su2_character(Spin(n - 1), b); }
    double dchi(double b) const {
        const double s = std::sin(b), c = std::cos(b);
        return (n * std::cos(n * b) * s - std::sin(n * b) * c) / (s * s);
    }
    double ddchi(double b) const {
        const double s = std::sin(b), c = std::cos(b);
        return (1.0 - n * n) * std::sin(n * b) / s - 2.0 * c * dchi(b) / s;
    }
};

// Newton with bisection safeguard for a root of f bracketed in [lo, hi]
template <typename F, typename DF>
double refine_root(F f, DF df, double lo, double hi, double xtol) {
    double flo = f(lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        const double d = df(x);
        double step = (d != 0.0) ? fx / d : (hi - lo);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) { // fall back to bisection
            if ((fx > 0) == (flo > 0)) {
                lo = x;
                flo = fx;
            } else {
                hi = x;
            }
            xn = 0.5 * (lo + hi);
            step = xn - x;
        } else {
            if ((fx > 0) == (flo > 0)) {
                lo = x;
                flo = fx;
            } else {
                hi = x;
            }
        }
        x = xn;
        if (std::abs(step) < xtol && std::abs(f(x)) < 1e-30 + 1e-12 * std::abs(df(x)))
            return x;
        if (std::abs(step) < 1e-15) return x;
    }
    throw NumericalError("refine_root: no convergence in bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

double torus_dist1(double a, double b) {
    const double d = std::abs(reduce_angle(a) - reduce_angle(b));
    return std::min(d, TWO_PI - d);
}

double torus_dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(torus_dist1(a[0], b[0]), torus_dist1(a[1], b[1]));
}

// All images of a torus point under the symmetry group of the SU(3)
// landscape: S3 permutations of (t1, t2, -t1-t2), Z3 center shifts, and the
// angle inversion coming from |chi(conj eps)| = |chi(eps)|.
std::vector<std::array<double, 2>> symmetry_images(double t1, double t2) {
    std::vector<std::array<double, 2>> out;
    out.reserve(36);
    const double t3 = -t1 - t2;
    const std::array<std::array<double, 3>, 6> perms = {{{t1, t2, t3},
                                                         {t1, t3, t2},
                                                         {t2, t1, t3},
                                                         {t2, t3, t1},
                                                         {t3, t1, t2},
                                                         {t3, t2, t1}}};
    for (const auto& p : perms)
        for (int c = 0; c < 3; ++c)
            for (int s = 0; s < 2; ++s) {
                const double sign = s ? -1.0 : 1.0;
                const double shift = c * TWO_PI / 3.0;
                out.push_back({reduce_angle(sign * p[0] + shift), reduce_angle(sign * p[1] + shift)});
            }
    return out;
}

std::array<double, 2> canonical_image(double t1, double t2) {
    auto best = std::array<double, 2>{1e30, 1e30};
    for (const auto& im : symmetry_images(t1, t2)) {
        // snap near-2pi coordinates down so equivalent images compare equal
        std::array<double, 2> c = im;
        for (double& a : c)
            if (TWO_PI - a < 1e-9) a = 0.0;
        if (c[0] < best[0] - 1e-12 ||
            (std::abs(c[0] - best[0]) <= 1e-12 && c[1] < best[1] - 1e-12))
            best = c;
    }
    return best;
}

struct EigPair {
    double lo, hi;
};

EigPair sym_eig2(const Eigen::Matrix2d& h) {
    const double tr = h(0, 0) + h(1, 1);
    const double disc = std::hypot(h(0, 0) - h(1, 1), 2.0 * h(0, 1));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

} // namespace

const CriticalPoint* CriticalReport::global_point() const {
    for (const auto& p : points)
        if (p.is_global) return &p;
    return nullptr;
}

int CriticalReport::count(CriticalPoint::Kind k) const {
    int n = 0;
    for (const auto& p : points)
        if (p.kind == k) ++n;
    return n;
}

std::vector<double> critical_values(const CriticalReport& report) {
    std::vector<double> v;
    v.reserve(report.points.size());
    for (const auto& p : report.points)
        v.push_back(p.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-9; }),
            v.end());
    return v;
}

CriticalReport critical_points_su2(Spin j, double refine_tol, int scan_resolution) {
    if (!(refine_tol > 0.0 && refine_tol <= 1e-4))
        throw std::invalid_argument("critical_points_su2: refine_tol must lie in (0, 1e-4]");
    if (scan_resolution < 4096)
        throw std::invalid_argument("critical_points_su2: scan resolution must be >= 4096");

    const int n = j.dim();
    const Irrep label = Irrep::su2(j);
    CriticalReport report;
    report.label = label;

    const auto push = [&](double beta, CriticalPoint::Kind kind, std::vector<double> hess) {
        CriticalPoint p;
        p.location = TorusPoint(beta);
        p.location.angles[0] = beta; // keep fundamental-domain coordinate
        p.value = fidelity_from_character(label, p.location);
        p.kind = kind;
        p.hessian_eigenvalues = std::move(hess);
        report.points.push_back(std::move(p));
    };

    // global maximum at beta = 0 (one-sided stationary by reflection symmetry)
    push(0.0, CriticalPoint::Kind::LocalMax, {-(double(n) * n - 1.0) / 3.0});

    if (n > 1) {
        const Su2Chi f{n};
        const double hi = 0.5 * PI;

        // zeros of chi: sign changes of sin(n b) on (0, pi/2)
        std::vector<double> zeros;
        {
            const auto g = [n](double b) { return std::sin(n * b); };
            const auto dg = [n](double b) { return n * std::cos(n * b); };
            double prev = 1e-9, gprev = g(prev);
            for (int k = 1; k <= scan_resolution; ++k) {
                const double b = hi * k / scan_resolution;
                const double gb = g(b);
                if (gprev == 0.0 || (gprev > 0) != (gb > 0)) {
                    const double z = refine_root(g, dg, prev, b, refine_tol * 1e-4);
                    if (z < hi - 1e-12) zeros.push_back(z);
                }
                prev = b;
                gprev = gb;
            }
            if (std::abs(g(hi)) < 1e-9) zeros.push_back(hi); // endpoint zero for even n
        }
        for (double z : zeros)
            push(z, CriticalPoint::Kind::LocalMin, {});

        // interior maxima: roots of chi' bracketed between consecutive zeros
        double prev = 1e-7;
        double dprev = f.dchi(prev);
        for (int k = 1; k <= scan_resolution; ++k) {
            const double b = std::min(hi - 1e-9, hi * k / scan_resolution + 1e-9);
            const double db = f.dchi(b);
            if ((dprev > 0) != (db > 0)) {
                bool at_zero = false;
                for (double z : zeros)
                    if (std::abs(0.5 * (prev + b) - z) < 2.0 * hi / scan_resolution &&
                        std::abs(f.chi(0.5 * (prev + b))) < 1e-6)
                        at_zero = true;
                if (!at_zero) {
                    const double m = refine_root([&f](double x) { return f.dchi(x); },
                                                 [&f](double x) { return f.ddchi(x); }, prev, b,
                                                 refine_tol * 1e-2);
                    const double jpp = (1.0 - double(n) * n) * std::abs(f.chi(m)) / n;
                    push(m, CriticalPoint::Kind::LocalMax, {jpp});
                }
            }
            prev = b;
            dprev = db;
            if (b >= hi - 1e-9) break;
        }

        // endpoint pi/2 is stationary by reflection; a maximum iff chi != 0 there
        if (n % 2 == 1)
            push(hi, CriticalPoint::Kind::LocalMax, {(1.0 - double(n) * n) / n});
    }

    std::sort(report.points.begin(), report.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  return a.location.angles[0] < b.location.angles[0];
              });

    double global = 0.0;
    for (const auto& p : report.points)
        global = std::max(global, p.value);
    bool flagged = false;
    for (auto& p : report.points) {
        if (!flagged && p.value > global - 1e-12) {
            p.is_global = true;
            flagged = true;
        }
        if (p.kind == CriticalPoint::Kind::LocalMax && p.value < global - 1e-9)
            ++report.suboptima_count;
    }

    report.global_basin = global_basin_su2(j);

    std::ostringstream os;
    os << "scan_resolution=" << scan_resolution << " refine_tol=" << refine_tol;
    report.notes = os.str();
    return report;
}

namespace {

// 1-D backtracking ascent on J(beta); used for basin checks
double ascend_su2(Spin j, double beta, int max_iters = 4000) {
    const int n = j.dim();
    const auto Jv = [&](double b) { return std::abs(su2_character(j, b)) / n; };
    const Su2Chi f{n};
    double J = Jv(beta);
    for (int it = 0; it < max_iters; ++it) {
        const double s = std::sin(beta);
        double g;
        if (std::abs(s) < 1e-12) {
            g = 0.0; // stationary at the center points
        } else {
            const double chi = f.chi(beta);
            if (std::abs(chi) < 1e-14) break; // modulus kink: stop at the zero
            g = (chi > 0 ? 1.0 : -1.0) * f.dchi(beta) / n;
        }
        if (std::abs(g) < 1e-10) break;
        double eta = 0.05 / std::abs(g);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const double b2 = beta + eta * g;
            const double J2 = Jv(b2);
            if (J2 >= J + 1e-4 * eta * g * g) {
                beta = b2;
                J = J2;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
    }
    return beta;
}

} // namespace

Interval global_basin_su2(Spin j) {
    const int n = j.dim();
    const double hi = 0.5 * PI;
    if (n == 1) return {0.0, hi};

    // first zero of J: first root of sin(n b)
    const auto g = [n](double b) { return std::sin(n * b); };
    const auto dg = [n](double b) { return n * std::cos(n * b); };
    double z = hi;
    {
        double prev = 1e-9, gprev = g(prev);
        const int res = 16384;
        for (int k = 1; k <= res; ++k) {
            const double b = hi * k / res;
            const double gb = g(b);
            if ((gprev > 0) != (gb > 0) || gb == 0.0) {
                z = refine_root(g, dg, prev, b, 1e-13);
                break;
            }
            prev = b;
            gprev = gb;
        }
    }

    // verify: interior starts flow to the global peak, exterior ones do not
    for (int k = 0; k < 64; ++k) {
        const double b0 = z * (k + 0.5) / 64.0;
        const double bf = ascend_su2(j, b0);
        if (std::abs(su2_character(j, bf)) / n < 1.0 - 1e-6)
            throw NumericalError("global_basin_su2: interior start escaped the basin");
    }
    if (z < hi - 1e-9) {
        const double slice = std::min(0.9 * (hi - z), 0.45 * z);
        for (int k = 0; k < 64; ++k) {
            const double b0 = z + slice * (k + 0.5) / 64.0;
            const double bf = ascend_su2(j, b0);
            if (std::abs(su2_character(j, bf)) / n > 1.0 - 1e-6)
                throw NumericalError("global_basin_su2: exterior start reached the global peak");
        }
    }
    return {0.0, z};
}

namespace {

struct TorusRefiner {
    const Su3CharacterPoly& poly;
    int n;

    // Levenberg-damped Newton toward a stationary point of F = |chi|^2.
    // Degenerate (flat) critical points make the plain Newton solve blow up;
    // damping keeps the iteration contracting at them. The gradient target is
    // near the floating-point noise floor: at a cubic- or quartic-flat point
    // the location error scales like |grad|^(1/2..1/3), so a sloppy target
    // leaves the flat Hessian eigenvalue unresolved and ruins classification.
    bool refine_stationary(Eigen::Vector2d& x) const {
        double mu = 1e-8;
        auto sq = poly.squared_jet(x(0), x(1));
        for (int it = 0; it < 400; ++it) {
            const double gn = sq.grad.norm();
            if (gn < grad_tol()) return true;
            bool stepped = false;
            for (int tries = 0; tries < 16; ++tries) {
                const Eigen::Matrix2d a =
                    sq.hess * sq.hess + mu * Eigen::Matrix2d::Identity();
                Eigen::Vector2d step = a.ldlt().solve(sq.hess * sq.grad);
                if (step.norm() > 0.3) step *= 0.3 / step.norm();
                const Eigen::Vector2d xn = x - step;
                const auto sqn = poly.squared_jet(xn(0), xn(1));
                if (sqn.grad.norm() < gn) {
                    x = xn;
                    sq = sqn;
                    mu = std::max(mu / 3.0, 1e-12);
                    stepped = true;
                    break;
                }
                mu *= 10.0;
            }
            if (!stepped) return sq.grad.norm() < grad_tol();
        }
        return sq.grad.norm() < grad_tol();
    }

    double grad_tol() const { return 1e-12 * double(n) * n; }

    // Gauss-Newton on (Re chi, Im chi) for zeros of the character
    bool refine_zero(Eigen::Vector2d& x) const {
        double mu = 1e-10;
        for (int it = 0; it < 200; ++it) {
            const auto j = poly.jet(x(0), x(1));
            const Eigen::Vector2d r(j.chi.real(), j.chi.imag());
            if (r.norm() < 1e-11 * n) return true;
            Eigen::Matrix2d jac;
            jac << j.d1.real(), j.d2.real(), j.d1.imag(), j.d2.imag();
            const Eigen::Matrix2d a =
                jac.transpose() * jac + mu * Eigen::Matrix2d::Identity();
            Eigen::Vector2d step = a.ldlt().solve(jac.transpose() * r);
            if (step.norm() > 0.3) step *= 0.3 / step.norm();
            x -= step;
            if (step.norm() < 1e-15) break;
        }
        return std::abs(poly.eval(x(0), x(1))) < 1e-10 * n;
    }

    // Local sampling classification for Hessian-degenerate stationary points.
    // The growth along a cubic/quartic flat direction lives in a narrow cone
    // around the near-null Hessian eigenvector, so that direction is probed
    // explicitly on top of a coarse circle sweep.
    CriticalPoint::Kind classify_by_sampling(const Eigen::Vector2d& x, double f0,
                                             const Eigen::Matrix2d& hess) const {
        const double floor = 1e-11 * double(n) * n;
        bool up = false, down = false;
        const auto probe = [&](double dx, double dy) {
            const double df = poly.squared_jet(x(0) + dx, x(1) + dy).f - f0;
            if (df > floor) up = true;
            if (df < -floor) down = true;
        };
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
        const int flat = std::abs(es.eigenvalues()(0)) < std::abs(es.eigenvalues()(1)) ? 0 : 1;
        const Eigen::Vector2d v = es.eigenvectors().col(flat);
        for (double r : {1e-3, 3e-3, 1e-2, 3e-2}) {
            probe(r * v(0), r * v(1));
            probe(-r * v(0), -r * v(1));
            for (int k = 0; k < 72; ++k) {
                const double a = TWO_PI * k / 72.0;
                probe(r * std::cos(a), r * std::sin(a));
            }
        }
        if (up && down) return CriticalPoint::Kind::Saddle;
        return up ? CriticalPoint::Kind::LocalMin : CriticalPoint::Kind::LocalMax;
    }
};

} // namespace

CriticalReport critical_points_torus(const Irrep& label, int resolution, double refine_tol) {
    if (label.group != Irrep::Group::SU3)
        throw std::invalid_argument("critical_points_torus: expected an SU(3) label");
    if (resolution < 128)
        throw std::invalid_argument("critical_points_torus: resolution must be >= 128");
    if (!(refine_tol > 0.0 && refine_tol <= 1e-4))
        throw std::invalid_argument("critical_points_torus: refine_tol must lie in (0, 1e-4]");

    const Su3CharacterPoly poly(label.r1, label.r2);
    const int n = label.dim();
    const TorusRefiner refiner{poly, n};
    const double dedup_radius = 10.0 * std::max(refine_tol, 1e-6 / 10.0);

    const int res = resolution;
    std::vector<double> fv(static_cast<std::size_t>(res) * res);
    std::vector<double> g1(fv.size()), g2(fv.size());
    for (int i = 0; i < res; ++i) {
        const double t1 = TWO_PI * i / res;
        for (int k = 0; k < res; ++k) {
            const auto sq = poly.squared_jet(t1, TWO_PI * k / res);
            const std::size_t idx = static_cast<std::size_t>(i) * res + k;
            fv[idx] = sq.f;
            g1[idx] = sq.grad(0);
            g2[idx] = sq.grad(1);
        }
    }
    const auto at = [&](const std::vector<double>& a, int i, int k) {
        return a[static_cast<std::size_t>((i + res) % res) * res + ((k + res) % res)];
    };

    std::vector<Eigen::Vector2d> candidates;
    for (int i = 0; i < res; ++i)
        for (int k = 0; k < res; ++k) {
            const double f0 = at(fv, i, k);
            bool is_max = true, is_min = true;
            for (int di = -1; di <= 1 && (is_max || is_min); ++di)
                for (int dk = -1; dk <= 1; ++dk) {
                    if (di == 0 && dk == 0) continue;
                    const double f = at(fv, i + di, k + dk);
                    if (f > f0) is_max = false;
                    if (f < f0) is_min = false;
                }
            bool sign_cell = false;
            {
                bool p1 = false, n1 = false, p2 = false, n2 = false;
                for (int di = 0; di <= 1; ++di)
                    for (int dk = 0; dk <= 1; ++dk) {
                        (at(g1, i + di, k + dk) > 0 ? p1 : n1) = true;
                        (at(g2, i + di, k + dk) > 0 ? p2 : n2) = true;
                    }
                sign_cell = p1 && n1 && p2 && n2;
            }
            if (is_max || is_min || sign_cell)
                candidates.emplace_back(TWO_PI * (i + 0.5 * sign_cell) / res,
                                        TWO_PI * (k + 0.5 * sign_cell) / res);
        }

    CriticalReport report;
    report.label = label;

    struct Cluster {
        Eigen::Vector2d rep;
        CriticalPoint point;
    };
    std::vector<Cluster> clusters;

    for (const auto& cand : candidates) {
        Eigen::Vector2d x = cand;
        CriticalPoint p;
        auto sq = poly.squared_jet(x(0), x(1));

        const bool near_zero = std::sqrt(sq.f) / n < 0.02;
        bool ok = false;
        if (near_zero) {
            ok = refiner.refine_zero(x);
            if (ok) {
                p.kind = CriticalPoint::Kind::LocalMin;
            }
        }
        if (!ok) {
            x = cand;
            ok = refiner.refine_stationary(x);
            if (!ok) {
                ++report.dropped_candidates;
                continue;
            }
            sq = poly.squared_jet(x(0), x(1));
            if (std::abs(sq.chi) < 1e-8 * n) {
                if (!refiner.refine_zero(x)) {
                    ++report.dropped_candidates;
                    continue;
                }
                p.kind = CriticalPoint::Kind::LocalMin;
            } else {
                const auto eig = sym_eig2(sq.hess);
                const double scale = std::max(std::abs(eig.lo), std::abs(eig.hi));
                const double denom = 2.0 * n * std::sqrt(sq.f);
                p.hessian_eigenvalues = {eig.lo / denom, eig.hi / denom};
                if (std::min(std::abs(eig.lo), std::abs(eig.hi)) > 1e-4 * scale) {
                    if (eig.hi < 0)
                        p.kind = CriticalPoint::Kind::LocalMax;
                    else if (eig.lo > 0)
                        p.kind = CriticalPoint::Kind::LocalMin;
                    else
                        p.kind = CriticalPoint::Kind::Saddle;
                } else {
                    p.kind = refiner.classify_by_sampling(x, sq.f, sq.hess);
                }
            }
        }

        const std::array<double, 2> xr = {reduce_angle(x(0)), reduce_angle(x(1))};
        bool merged = false;
        for (auto& cl : clusters) {
            const std::array<double, 2> ref = {cl.rep(0), cl.rep(1)};
            for (const auto& im : symmetry_images(xr[0], xr[1]))
                if (torus_dist2(im, ref) < dedup_radius) {
                    merged = true;
                    break;
                }
            if (merged) break;
        }
        if (merged) continue;

        const auto canon = canonical_image(xr[0], xr[1]);
        p.location = TorusPoint(canon[0], canon[1]);
        p.value = fidelity_from_character(label, p.location);
        clusters.push_back({Eigen::Vector2d(xr[0], xr[1]), std::move(p)});
    }

    double global = 0.0;
    for (const auto& cl : clusters)
        global = std::max(global, cl.point.value);
    bool flagged = false;
    for (auto& cl : clusters) {
        if (!flagged && cl.point.value > global - 1e-12) {
            cl.point.is_global = true;
            flagged = true;
        }
        if (cl.point.kind == CriticalPoint::Kind::LocalMax && cl.point.value < global - 1e-9)
            ++report.suboptima_count;
        report.points.push_back(std::move(cl.point));
    }
    std::sort(report.points.begin(), report.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  if (a.value != b.value) return a.value > b.value;
                  return a.location.angles < b.location.angles;
              });

    // multistart basin estimate for the report (deterministic seed)
    {
        Rng rng(0x5eedULL);
        const int starts = 512;
        int hits = 0;
        for (int s = 0; s < starts; ++s) {
            Eigen::Vector2d x(rng.uniform(0.0, TWO_PI), rng.uniform(0.0, TWO_PI));
            auto sq = poly.squared_jet(x(0), x(1));
            for (int it = 0; it < 2000; ++it) {
                const double gn = sq.grad.norm();
                if (gn < 1e-10) break;
                double eta = 0.2 / gn;
                bool accepted = false;
                for (int bt = 0; bt < 60; ++bt) {
                    const Eigen::Vector2d xn = x + eta * sq.grad;
                    const auto sqn = poly.squared_jet(xn(0), xn(1));
                    if (sqn.f >= sq.f + 1e-4 * eta * gn * gn) {
                        x = xn;
                        sq = sqn;
                        accepted = true;
                        break;
                    }
                    eta *= 0.5;
                }
                if (!accepted) break;
            }
            if (std::sqrt(sq.f) / n > 1.0 - 1e-6) ++hits;
        }
        report.basin_fraction = static_cast<double>(hits) / starts;
    }

    std::ostringstream os;
    os << "resolution=" << res << " refine_tol=" << refine_tol
       << " candidates=" << candidates.size() << " dropped=" << report.dropped_candidates;
    report.notes = os.str();
    return report;
}

RuggednessSummary ruggedness_compare(const std::vector<Irrep>& labels, int resolution, int starts,
                                     std::uint64_t seed) {
    if (labels.empty())
        throw std::invalid_argument("ruggedness_compare: no labels");
    const int dim = labels.front().dim();
    for (const auto& l : labels)
        if (l.dim() != dim)
            throw std::invalid_argument("ruggedness_compare: labels must share one dimension");

    RuggednessSummary summary;
    summary.resolution = resolution;
    summary.starts = starts;
    summary.seed = seed;

    Rng rng(seed);
    for (std::size_t li = 0; li < labels.size(); ++li) {
        const Irrep& label = labels[li];
        RuggednessEntry e;
        e.label = label;
        Rng lr = rng.child(li);

        if (label.group == Irrep::Group::SU2) {
            const auto report = critical_points_su2(label.spin);
            e.local_maxima = report.count(CriticalPoint::Kind::LocalMax);
            e.suboptima = report.suboptima_count;
            const int n = label.dim();
            e.peak_sharpness = (double(n) * n - 1.0) / 3.0;
            int hits = 0;
            for (int s = 0; s < starts; ++s) {
                const double bf = ascend_su2(label.spin, lr.uniform(0.0, TWO_PI));
                if (std::abs(su2_character(label.spin, bf)) / n > 1.0 - 1e-6) ++hits;
            }
            e.basin_fraction = static_cast<double>(hits) / starts;
        } else {
            auto report = critical_points_torus(label, resolution, 1e-4);
            e.local_maxima = report.count(CriticalPoint::Kind::LocalMax);
            e.suboptima = report.suboptima_count;
            const Su3CharacterPoly poly(label.r1, label.r2);
            const int n = label.dim();
            {
                const auto sq = poly.squared_jet(0.0, 0.0);
                const auto eig = sym_eig2(sq.hess);
                const double denom = 2.0 * n * std::sqrt(sq.f);
                e.peak_sharpness = std::min(std::abs(eig.lo), std::abs(eig.hi)) / denom;
            }
            int hits = 0;
            for (int s = 0; s < starts; ++s) {
                Eigen::Vector2d x(lr.uniform(0.0, TWO_PI), lr.uniform(0.0, TWO_PI));
                auto sq = poly.squared_jet(x(0), x(1));
                for (int it = 0; it < 2000; ++it) {
                    const double gn = sq.grad.norm();
                    if (gn < 1e-10) break;
                    double eta = 0.2 / gn;
                    bool accepted = false;
                    for (int bt = 0; bt < 60; ++bt) {
                        const Eigen::Vector2d xn = x + eta * sq.grad;
                        const auto sqn = poly.squared_jet(xn(0), xn(1));
                        if (sqn.f >= sq.f + 1e-4 * eta * gn * gn) {
                            x = xn;
                            sq = sqn;
                            accepted = true;
                            break;
                        }
                        eta *= 0.5;
                    }
                    if (!accepted) break;
                }
                if (std::sqrt(sq.f) / n > 1.0 - 1e-6) ++hits;
            }
            e.basin_fraction = static_cast<double>(hits) / starts;
        }
        summary.entries.push_back(e);
    }

    std::stable_sort(summary.entries.begin(), summary.entries.end(),
                     [](const RuggednessEntry& a, const RuggednessEntry& b) {
                         return a.local_maxima > b.local_maxima;
                     });
    return summary;
}

} // namespace qcl
