#pragma once

#include "qcl/spin.hpp"

#include <array>
#include <string>
#include <vector>

namespace qcl {

/// Irreducible representation label: SU(2) spin j, or SU(3) strictly
/// decreasing exponents r1 > r2 >= 1 (trailing exponent 0 implicit).
struct Irrep {
    enum class Group { SU2, SU3 };

    Group group = Group::SU2;
    Spin spin;          // SU2
    int r1 = 0, r2 = 0; // SU3

    static Irrep su2(Spin j) {
        Irrep l;
        l.group = Group::SU2;
        l.spin = j;
        return l;
    }
    static Irrep su3(int r1, int r2) {
        if (!(r1 > r2 && r2 >= 1))
            throw std::invalid_argument("Irrep: SU(3) label requires r1 > r2 >= 1");
        Irrep l;
        l.group = Group::SU3;
        l.r1 = r1;
        l.r2 = r2;
        return l;
    }

    int dim() const {
        if (group == Group::SU2) return spin.dim();
        return r1 * r2 * (r1 - r2) / 2;
    }
    int torus_rank() const { return group == Group::SU2 ? 1 : 2; }
    std::string name() const;
};

/// "su2:j=3", "su2:j=7/2", "su3:r1=6,r2=1"
Irrep parse_irrep(const std::string& text);

/// "7/2", "3.5" or "3" -> Spin
Spin parse_spin(const std::string& text);

/// Conjugacy-class angles: one angle (beta) for SU(2), two (theta1, theta2)
/// for SU(3), reduced mod 2pi. The induced eigenvalues are (e^{i b}, e^{-i b})
/// and (e^{i t1}, e^{i t2}, e^{-i(t1+t2)}) so their product is 1 by
/// construction.
struct TorusPoint {
    std::vector<double> angles;

    TorusPoint() = default;
    explicit TorusPoint(double beta);
    TorusPoint(double theta1, double theta2);

    double beta() const { return angles.at(0); }
    double theta1() const { return angles.at(0); }
    double theta2() const { return angles.at(1); }
};

double reduce_angle(double a); // into [0, 2pi)

/// chi_j(beta) = sin((2j+1) beta)/sin(beta), extended by continuity at the
/// zeros of the denominator (value +-(2j+1) there). Un-normalized: the
/// fidelity normalization is a separate operation.
double su2_character(Spin j, double beta);

/// Weyl alternant ratio det[e^r1, e^r2, 1]/det[e^2, e, 1] over the induced
/// eigenvalues, evaluated through the Schur-polynomial (Jacobi-Trudi) limit
/// wherever the Vandermonde denominator is small, which makes the value
/// continuous across the Weyl walls.
Complex su3_character(int r1, int r2, double theta1, double theta2);

Complex irrep_character(const Irrep& label, const TorusPoint& p);

/// J = |chi(p)| / dim. Lands in [0, 1], equal to 1 exactly on central classes.
double fidelity_from_character(const Irrep& label, const TorusPoint& p);

/// The SU(3) character as a finite Fourier series on the torus. Exact
/// evaluation (integer coefficients, unit-modulus terms) with analytic
/// first and second derivatives; topology refinement runs on this form.
class Su3CharacterPoly {
public:
    Su3CharacterPoly(int r1, int r2);

    Complex eval(double t1, double t2) const;

    struct Jet {
        Complex chi;
        Complex d1, d2;        // d chi / d theta_k
        Complex d11, d12, d22; // second derivatives
    };
    Jet jet(double t1, double t2) const;

    /// |chi|^2 with gradient and Hessian assembled from the chi jet.
    struct SquaredJet {
        double f;
        Eigen::Vector2d grad;
        Eigen::Matrix2d hess;
        Complex chi;
    };
    SquaredJet squared_jet(double t1, double t2) const;

    int term_count() const { return static_cast<int>(coeff_.size()); }

private:
    std::vector<double> m1_, m2_, coeff_;
};

/// Landscape values on the fundamental scan domain: beta in [0, pi/2]
/// inclusive for SU(2) (resolution points), (theta1, theta2) in [0, 2pi)^2
/// for SU(3) (resolution points per axis, endpoint excluded as 2pi = 0).
struct LandscapeGrid {
    Irrep label;
    int resolution = 0;
    std::array<std::string, 2> axis_names{{"", ""}};
    std::vector<double> axis1, axis2;
    std::vector<double> values; // 1-D: values[i]; 2-D row-major values[i1*n2+i2]

    double at(int i1, int i2) const {
        return values[static_cast<std::size_t>(i1) * axis2.size() + i2];
    }
};

LandscapeGrid scan_landscape(const Irrep& label, int resolution);

/// Weyl-measure integral of |chi|^2 over the torus, normalized so every
/// irreducible character integrates to 1. Rectangle-rule quadrature with
/// `quadrature_points` nodes per torus angle; the integrand is a
/// trigonometric polynomial, so the rule is exact once the node count
/// exceeds its bandwidth.
double weyl_orthonormality(const Irrep& label, int quadrature_points);

} // namespace qcl
