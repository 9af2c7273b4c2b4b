#include "qcl/characters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace qcl {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;

// complete homogeneous symmetric polynomial h_k(x, y, z); h_{<0} = 0
Complex h_sym(int k, Complex x, Complex y, Complex z) {
    if (k < 0) return {0.0, 0.0};
    std::vector<Complex> zp(k + 1);
    zp[0] = {1.0, 0.0};
    for (int l = 1; l <= k; ++l) zp[l] = zp[l - 1] * z;
    Complex sum{0.0, 0.0};
    Complex xi{1.0, 0.0};
    for (int i = 0; i <= k; ++i) {
        Complex yj{1.0, 0.0};
        for (int jj = 0; jj <= k - i; ++jj) {
            sum += xi * yj * zp[k - i - jj];
            yj *= y;
        }
        xi *= x;
    }
    return sum;
}

std::array<Complex, 3> su3_eigenvalues(double t1, double t2) {
    return {std::polar(1.0, t1), std::polar(1.0, t2), std::polar(1.0, -(t1 + t2))};
}

} // namespace

std::string Irrep::name() const {
    std::ostringstream os;
    if (group == Group::SU2) {
        os << "su2:j=";
        if (spin.integer())
            os << spin.two_j / 2;
        else
            os << spin.two_j << "/2";
    } else {
        os << "su3:r1=" << r1 << ",r2=" << r2;
    }
    return os.str();
}

Spin parse_spin(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const int num = std::stoi(text.substr(0, slash));
        const int den = std::stoi(text.substr(slash + 1));
        if (den != 2 || num < 0)
            throw std::invalid_argument("parse_spin: expected n/2 with n >= 0, got '" + text + "'");
        return Spin(num);
    }
    const double v = std::stod(text);
    const double tj = 2.0 * v;
    const double rounded = std::round(tj);
    if (v < 0 || std::abs(tj - rounded) > 1e-9)
        throw std::invalid_argument("parse_spin: '" + text + "' is not a half-integer");
    return Spin(static_cast<int>(rounded));
}

Irrep parse_irrep(const std::string& text) {
    if (text.rfind("su2:j=", 0) == 0)
        return Irrep::su2(parse_spin(text.substr(6)));
    if (text.rfind("su3:r1=", 0) == 0) {
        const auto comma = text.find(",r2=");
        if (comma == std::string::npos)
            throw std::invalid_argument("parse_irrep: expected su3:r1=<int>,r2=<int>");
        const int r1 = std::stoi(text.substr(7, comma - 7));
        const int r2 = std::stoi(text.substr(comma + 4));
        return Irrep::su3(r1, r2);
    }
    throw std::invalid_argument("parse_irrep: unrecognized label '" + text + "'");
}

double reduce_angle(double a) {
    double r = std::fmod(a, TWO_PI);
    if (r < 0) r += TWO_PI;
    if (r == TWO_PI) r = 0.0;
    return r;
}

TorusPoint::TorusPoint(double beta) : angles{reduce_angle(beta)} {}
TorusPoint::TorusPoint(double theta1, double theta2)
    : angles{reduce_angle(theta1), reduce_angle(theta2)} {}

double su2_character(Spin j, double beta) {
    const int n = j.dim();
    const double s = std::sin(beta);
    if (std::abs(s) > 1e-4)
        return std::sin(n * beta) / s;
    // the ratio cancels catastrophically near its poles; the finite
    // geometric sum sum_m e^{2 i m beta} is exact and continuous there
    double acc = 0.0;
    for (int m2 = -j.two_j; m2 <= j.two_j; m2 += 2)
        acc += std::cos(m2 * beta);
    return acc;
}

Complex su3_character(int r1, int r2, double theta1, double theta2) {
    if (!(r1 > r2 && r2 >= 1))
        throw std::invalid_argument("su3_character: label requires r1 > r2 >= 1");
    const auto e = su3_eigenvalues(theta1, theta2);

    const Complex den = (e[0] - e[1]) * (e[0] - e[2]) * (e[1] - e[2]);
    if (std::abs(den) > 1e-5) {
        const auto alt = [&e](int p1, int p2) {
            // det of [e_i^p1, e_i^p2, 1]
            Complex a = std::pow(e[0], p1), b = std::pow(e[0], p2);
            Complex c = std::pow(e[1], p1), d = std::pow(e[1], p2);
            Complex f = std::pow(e[2], p1), g = std::pow(e[2], p2);
            return a * (d - g) - b * (c - f) + (c * g - d * f);
        };
        return alt(r1, r2) / alt(2, 1);
    }
    // Weyl wall: evaluate the Schur-polynomial limit via Jacobi-Trudi,
    // s_{(a,b,0)} = h_a h_b - h_{a+1} h_{b-1} with a = r1-2, b = r2-1.
    const int a = r1 - 2, b = r2 - 1;
    return h_sym(a, e[0], e[1], e[2]) * h_sym(b, e[0], e[1], e[2]) -
           h_sym(a + 1, e[0], e[1], e[2]) * h_sym(b - 1, e[0], e[1], e[2]);
}

Complex irrep_character(const Irrep& label, const TorusPoint& p) {
    if (label.group == Irrep::Group::SU2)
        return {su2_character(label.spin, p.beta()), 0.0};
    return su3_character(label.r1, label.r2, p.theta1(), p.theta2());
}

double fidelity_from_character(const Irrep& label, const TorusPoint& p) {
    // |chi| <= dim holds exactly; clip the ~1e-10 evaluation noise that can
    // push the ratio past 1 close to central elements
    return std::min(1.0, std::abs(irrep_character(label, p)) / label.dim());
}

Su3CharacterPoly::Su3CharacterPoly(int r1, int r2) {
    if (!(r1 > r2 && r2 >= 1))
        throw std::invalid_argument("Su3CharacterPoly: label requires r1 > r2 >= 1");
    const int a = r1 - 2, b = r2 - 1;

    using Mono = std::array<int, 3>;
    const auto h_monomials = [](int k) {
        std::vector<Mono> out;
        for (int i = 0; i <= k; ++i)
            for (int jj = 0; jj <= k - i; ++jj)
                out.push_back({i, jj, k - i - jj});
        return out;
    };

    std::map<Mono, long long> poly;
    const auto accumulate = [&poly](const std::vector<Mono>& u, const std::vector<Mono>& v,
                                    long long sign) {
        for (const Mono& p : u)
            for (const Mono& q : v)
                poly[{p[0] + q[0], p[1] + q[1], p[2] + q[2]}] += sign;
    };
    accumulate(h_monomials(a), h_monomials(b), +1);
    if (b - 1 >= 0)
        accumulate(h_monomials(a + 1), h_monomials(b - 1), -1);

    // substitute z = conj(x y): monomial x^p y^q z^r -> e^{i[(p-r)t1 + (q-r)t2]}
    std::map<std::array<int, 2>, long long> fourier;
    for (const auto& [m, c] : poly) {
        if (c == 0) continue;
        fourier[{m[0] - m[2], m[1] - m[2]}] += c;
    }
    for (const auto& [k, c] : fourier) {
        if (c == 0) continue;
        m1_.push_back(k[0]);
        m2_.push_back(k[1]);
        coeff_.push_back(static_cast<double>(c));
    }
}

Complex Su3CharacterPoly::eval(double t1, double t2) const {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < coeff_.size(); ++k)
        acc += coeff_[k] * std::polar(1.0, m1_[k] * t1 + m2_[k] * t2);
    return acc;
}

Su3CharacterPoly::Jet Su3CharacterPoly::jet(double t1, double t2) const {
    Jet out{};
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        const Complex term = coeff_[k] * std::polar(1.0, m1_[k] * t1 + m2_[k] * t2);
        const double a = m1_[k], b = m2_[k];
        out.chi += term;
        out.d1 += Complex(0, a) * term;
        out.d2 += Complex(0, b) * term;
        out.d11 -= a * a * term;
        out.d12 -= a * b * term;
        out.d22 -= b * b * term;
    }
    return out;
}

Su3CharacterPoly::SquaredJet Su3CharacterPoly::squared_jet(double t1, double t2) const {
    const Jet j = jet(t1, t2);
    SquaredJet out;
    out.chi = j.chi;
    out.f = std::norm(j.chi);
    const Complex cc = std::conj(j.chi);
    out.grad(0) = 2.0 * (cc * j.d1).real();
    out.grad(1) = 2.0 * (cc * j.d2).real();
    out.hess(0, 0) = 2.0 * (std::conj(j.d1) * j.d1 + cc * j.d11).real();
    out.hess(0, 1) = 2.0 * (std::conj(j.d1) * j.d2 + cc * j.d12).real();
    out.hess(1, 0) = out.hess(0, 1);
    out.hess(1, 1) = 2.0 * (std::conj(j.d2) * j.d2 + cc * j.d22).real();
    return out;
}

LandscapeGrid scan_landscape(const Irrep& label, int resolution) {
    if (resolution < 16)
        throw std::invalid_argument("scan_landscape: resolution must be >= 16");

    LandscapeGrid grid;
    grid.label = label;
    grid.resolution = resolution;

    if (label.group == Irrep::Group::SU2) {
        grid.axis_names = {"beta", ""};
        grid.axis1.resize(resolution);
        grid.values.resize(resolution);
        const double hi = 0.5 * std::numbers::pi;
        const int n = label.dim();
        for (int i = 0; i < resolution; ++i) {
            const double beta = hi * i / (resolution - 1);
            grid.axis1[i] = beta;
            grid.values[i] = std::abs(su2_character(label.spin, beta)) / n;
        }
        return grid;
    }

    grid.axis_names = {"theta1", "theta2"};
    grid.axis1.resize(resolution);
    grid.axis2.resize(resolution);
    grid.values.resize(static_cast<std::size_t>(resolution) * resolution);
    const Su3CharacterPoly poly(label.r1, label.r2);
    const int n = label.dim();
    for (int i = 0; i < resolution; ++i)
        grid.axis1[i] = grid.axis2[i] = TWO_PI * i / resolution;
    for (int i1 = 0; i1 < resolution; ++i1)
        for (int i2 = 0; i2 < resolution; ++i2)
            grid.values[static_cast<std::size_t>(i1) * resolution + i2] =
                std::abs(poly.eval(grid.axis1[i1], grid.axis2[i2])) / n;
    return grid;
}

double weyl_orthonormality(const Irrep& label, int quadrature_points) {
    const int q = quadrature_points;
    if (q < 256)
        throw std::invalid_argument("weyl_orthonormality: need >= 256 quadrature points");

    if (label.group == Irrep::Group::SU2) {
        // (1/|W|) (1/2pi) int |2 sin b|^2 |chi|^2 db, |W| = 2
        double acc = 0.0;
        for (int k = 0; k < q; ++k) {
            const double b = TWO_PI * k / q;
            const double chi = su2_character(label.spin, b);
            const double s = 2.0 * std::sin(b);
            acc += s * s * chi * chi;
        }
        return acc / (2.0 * q);
    }

    // (1/|W|) (1/2pi)^2 int |Delta|^2 |chi|^2, |W| = 6
    double acc = 0.0;
    for (int k1 = 0; k1 < q; ++k1) {
        const double t1 = TWO_PI * k1 / q;
        for (int k2 = 0; k2 < q; ++k2) {
            const double t2 = TWO_PI * k2 / q;
            const auto e = su3_eigenvalues(t1, t2);
            const Complex delta = (e[0] - e[1]) * (e[0] - e[2]) * (e[1] - e[2]);
            const Complex chi = su3_character(label.r1, label.r2, t1, t2);
            acc += std::norm(delta) * std::norm(chi);
        }
    }
    return acc / (6.0 * static_cast<double>(q) * q);
}

} // namespace qcl
