#pragma once

#include "qcl/characters.hpp"

#include <cstdint>

namespace qcl {

struct CriticalPoint {
    enum class Kind { LocalMax, LocalMin, Saddle };

    TorusPoint location;
    double value = 0.0;
    Kind kind = Kind::LocalMax;
    std::vector<double> hessian_eigenvalues; // of J; empty at modulus kinks
    bool is_global = false;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

struct CriticalReport {
    Irrep label;
    std::vector<CriticalPoint> points; // deduplicated
    int suboptima_count = 0;           // local maxima strictly below the global value
    Interval global_basin;             // SU(2): [0, first zero of J]
    double basin_fraction = -1.0;      // multistart estimate of the global basin
    int dropped_candidates = 0;
    std::string notes;

    const CriticalPoint* global_point() const;
    int count(CriticalPoint::Kind k) const;
};

/// Sorted distinct critical values (ascending) of a report.
std::vector<double> critical_values(const CriticalReport& report);

/// Critical points of J_j(beta) = |sin((2j+1)b)/((2j+1) sin b)| on the
/// fundamental domain [0, pi/2]. Zeros of the character are minima of value
/// zero (modulus kink); interior stationary points of chi are all maxima
/// since chi'' = (1-N^2) chi there. Satisfies suboptima_count = floor(j).
CriticalReport critical_points_su2(Spin j, double refine_tol = 1e-6, int scan_resolution = 8192);

/// [0, pi/(2j+1)]: the first zero of J bounds the attraction region of the
/// global maximum at beta = 0. Verified by gradient ascent from 64 interior
/// and 64 exterior starts.
Interval global_basin_su2(Spin j);

/// Critical points of an SU(3) character landscape over the torus.
/// Grid candidates are refined by Levenberg-damped Newton on |chi|^2 (zeros
/// of chi refined on (Re chi, Im chi) instead) and deduplicated under the
/// full symmetry group of the landscape: S3 eigenvalue permutations, the
/// Z3 center translation and complex-conjugation inversion.
CriticalReport critical_points_torus(const Irrep& label, int resolution, double refine_tol = 1e-4);

struct RuggednessEntry {
    Irrep label;
    int local_maxima = 0;
    int suboptima = 0;
    double basin_fraction = 0.0;
    double peak_sharpness = 0.0; // smallest |Hessian eigenvalue| of J at the global max
};

struct RuggednessSummary {
    std::vector<RuggednessEntry> entries; // ordered by local_maxima, descending
    int resolution = 0;
    int starts = 0;
    std::uint64_t seed = 0;
};

/// Side-by-side landscape ruggedness for labels of one common dimension:
/// local-maxima counts, basin-of-attraction fractions from uniform random
/// multistart ascent, and global-peak sharpness.
RuggednessSummary ruggedness_compare(const std::vector<Irrep>& labels, int resolution = 384,
                                     int starts = 1000, std::uint64_t seed = 1);

} // namespace qcl
