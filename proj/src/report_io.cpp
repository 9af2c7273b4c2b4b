#include "qcl/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace qcl {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* kind_name(CriticalPoint::Kind k) {
    switch (k) {
    case CriticalPoint::Kind::LocalMax: return "local_max";
    case CriticalPoint::Kind::LocalMin: return "local_min";
    default: return "saddle";
    }
}

} // namespace

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix JSON must be a non-empty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw std::invalid_argument("matrix JSON rows have inconsistent lengths");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = j[r][c];
            if (e.is_number()) {
                m(r, c) = Complex(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw std::invalid_argument("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

json grid_to_json(const LandscapeGrid& grid, const json& config) {
    json j;
    j["label"] = grid.label.name();
    j["resolution"] = grid.resolution;
    j["axes"] = json::array();
    j["axes"].push_back({{"name", grid.axis_names[0]}, {"points", grid.axis1}});
    if (!grid.axis2.empty())
        j["axes"].push_back({{"name", grid.axis_names[1]}, {"points", grid.axis2}});
    j["values"] = grid.values;
    j["config"] = config;
    return j;
}

json critical_report_to_json(const CriticalReport& report) {
    json pts = json::array();
    for (const auto& p : report.points) {
        json e;
        e["location"] = p.location.angles;
        e["value"] = p.value;
        e["kind"] = kind_name(p.kind);
        e["hessian_eigenvalues"] = p.hessian_eigenvalues;
        e["is_global"] = p.is_global;
        pts.push_back(std::move(e));
    }
    json j;
    j["label"] = report.label.name();
    j["points"] = std::move(pts);
    j["suboptima_count"] = report.suboptima_count;
    j["local_maxima_count"] = report.count(CriticalPoint::Kind::LocalMax);
    j["local_minima_count"] = report.count(CriticalPoint::Kind::LocalMin);
    j["saddle_count"] = report.count(CriticalPoint::Kind::Saddle);
    j["global_basin"] = {report.global_basin.lo, report.global_basin.hi};
    j["basin_fraction"] = report.basin_fraction;
    j["dropped_candidates"] = report.dropped_candidates;
    j["notes"] = report.notes;
    return j;
}

std::string critical_report_table(const CriticalReport& report) {
    std::ostringstream os;
    os << "critical points for " << report.label.name() << "\n";
    os << std::left << std::setw(26) << "location" << std::setw(14) << "value" << std::setw(11)
       << "kind" << std::setw(8) << "global" << "hessian eigenvalues\n";
    for (const auto& p : report.points) {
        std::ostringstream loc;
        loc << "(";
        for (std::size_t k = 0; k < p.location.angles.size(); ++k)
            loc << (k ? ", " : "") << std::setprecision(6) << std::fixed
                << p.location.angles[k];
        loc << ")";
        os << std::left << std::setw(26) << loc.str() << std::setw(14) << std::setprecision(8)
           << std::fixed << p.value << std::setw(11) << kind_name(p.kind) << std::setw(8)
           << (p.is_global ? "yes" : "") << std::setprecision(4) << std::scientific;
        for (double h : p.hessian_eigenvalues)
            os << h << " ";
        os << "\n";
    }
    os << "suboptima: " << report.suboptima_count;
    if (report.label.group == Irrep::Group::SU2)
        os << "   global basin: [0, " << std::setprecision(10) << std::fixed
           << report.global_basin.hi << "]";
    if (report.basin_fraction >= 0.0)
        os << "   basin fraction: " << std::setprecision(4) << std::fixed
           << report.basin_fraction;
    os << "\n" << report.notes << "\n";
    return os.str();
}

json flow_results_to_json(const std::vector<FlowResult>& flows, std::uint64_t seed) {
    json arr = json::array();
    for (std::size_t k = 0; k < flows.size(); ++k) {
        const auto& f = flows[k];
        json e;
        e["seed"] = seed;
        e["run"] = k;
        e["final_J"] = f.final_J;
        e["iterations"] = f.iterations;
        e["residual"] = f.residual;
        e["converged"] = f.converged;
        if (f.kink_restarts) e["kink_restarts"] = f.kink_restarts;
        arr.push_back(std::move(e));
    }
    return arr;
}

json ruggedness_to_json(const RuggednessSummary& summary) {
    json rows = json::array();
    for (const auto& e : summary.entries) {
        json r;
        r["label"] = e.label.name();
        r["local_maxima"] = e.local_maxima;
        r["suboptima"] = e.suboptima;
        r["basin_fraction"] = e.basin_fraction;
        r["peak_sharpness"] = e.peak_sharpness;
        rows.push_back(std::move(r));
    }
    json j;
    j["entries"] = std::move(rows);
    j["ordering"] = json::array();
    for (const auto& e : summary.entries)
        j["ordering"].push_back(e.label.name());
    j["resolution"] = summary.resolution;
    j["starts"] = summary.starts;
    j["seed"] = summary.seed;
    return j;
}

json closure_to_json(const LieClosureResult& closure) {
    json j;
    j["dim"] = closure.dim;
    j["traceless_dim"] = closure.traceless_dim;
    j["controllable"] = closure.controllable;
    j["rounds"] = closure.rounds;
    j["ambient_dim"] = closure.basis.ambient_dim;
    return j;
}

json grape_outcome_to_json(const GrapeOutcome& o, int run_index) {
    json j;
    j["run"] = run_index;
    j["final_J"] = o.final_J;
    j["gradient_norm"] = o.gradient_norm;
    j["iterations"] = o.iterations;
    j["converged"] = o.converged;
    if (o.kink_restarts) j["kink_restarts"] = o.kink_restarts;
    j["trajectory"] = o.trajectory;
    return j;
}

json trap_statistics_to_json(const TrapStatistics& st) {
    json j;
    j["reference"] = st.reference;
    j["counts"] = st.counts;
    j["total"] = st.total;
    j["unassigned"] = st.unassigned;
    j["trapped_fraction"] = st.trapped_fraction;
    j["unassigned_fraction"] = st.unassigned_fraction;
    return j;
}

void write_grid_csv(const std::filesystem::path& path, const LandscapeGrid& grid) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path.string());
    if (grid.axis2.empty()) {
        out << grid.axis_names[0] << ",J\n";
        for (std::size_t i = 0; i < grid.axis1.size(); ++i)
            out << fmt_double(grid.axis1[i]) << "," << fmt_double(grid.values[i]) << "\n";
    } else {
        out << grid.axis_names[0] << "," << grid.axis_names[1] << ",J\n";
        for (std::size_t i1 = 0; i1 < grid.axis1.size(); ++i1)
            for (std::size_t i2 = 0; i2 < grid.axis2.size(); ++i2)
                out << fmt_double(grid.axis1[i1]) << "," << fmt_double(grid.axis2[i2]) << ","
                    << fmt_double(grid.values[i1 * grid.axis2.size() + i2]) << "\n";
    }
    if (!out) throw std::invalid_argument("write failed: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::invalid_argument("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_grape_jsonl(const std::filesystem::path& path,
                       const std::vector<GrapeOutcome>& outcomes) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path.string());
    for (std::size_t k = 0; k < outcomes.size(); ++k)
        out << grape_outcome_to_json(outcomes[k], static_cast<int>(k)).dump() << "\n";
    if (!out) throw std::invalid_argument("write failed: " + path.string());
}

Problem parse_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("problem file is not valid JSON: " + std::string(e.what()));
    }

    if (!j.contains("dim") || !j.contains("h0") || !j.contains("controls"))
        throw std::invalid_argument("problem file needs fields dim, h0, controls");
    const int dim = j["dim"].get<int>();
    Mat h0 = mat_from_json(j["h0"]);
    if (h0.rows() != dim)
        throw std::invalid_argument("h0 dimension does not match dim");
    std::vector<Mat> controls;
    for (const auto& c : j["controls"])
        controls.push_back(mat_from_json(c));

    Problem prob{make_control_system(std::move(h0), std::move(controls)), std::nullopt, {}, j};

    if (j.contains("target"))
        prob.target = mat_from_json(j["target"]);

    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        auto& x = prob.experiment;
        if (e.contains("starts")) x.starts = e["starts"].get<int>();
        if (e.contains("steps")) x.steps = e["steps"].get<int>();
        if (e.contains("dt")) x.dt = e["dt"].get<double>();
        if (e.contains("t_f")) x.t_f = e["t_f"].get<double>();
        if (e.contains("amp_init_range")) x.amp_init_range = e["amp_init_range"].get<double>();
        if (e.contains("amp_bound")) x.amp_bound = e["amp_bound"].get<double>();
        if (e.contains("grad_tol")) x.grad_tol = e["grad_tol"].get<double>();
        if (e.contains("max_iterations")) x.max_iterations = e["max_iterations"].get<int>();
        if (e.contains("seed")) x.seed = e["seed"].get<std::uint64_t>();
    }
    return prob;
}

GrapeConfig grape_config_from(const ExperimentSpec& exp, const ControlSystem& sys) {
    GrapeConfig cfg;
    cfg.starts = exp.starts;
    cfg.steps = exp.steps;
    cfg.amp_init_range = exp.amp_init_range;
    cfg.amp_bound = exp.amp_bound;
    cfg.grad_tol = exp.grad_tol;
    cfg.max_iterations = exp.max_iterations;
    cfg.seed = exp.seed;
    if (exp.dt > 0.0) {
        cfg.dt = exp.dt;
    } else {
        double tf = exp.t_f;
        if (tf <= 0.0) {
            // long enough for the reachable set to fill the symmetry group
            Eigen::SelfAdjointEigenSolver<Mat> es(sys.h0);
            const double h0_norm =
                std::max({std::abs(es.eigenvalues().minCoeff()),
                          std::abs(es.eigenvalues().maxCoeff()), 1e-6});
            tf = 10.0 * std::numbers::pi * sys.dim() / h0_norm;
        }
        cfg.dt = tf / cfg.steps;
    }
    if (cfg.dt <= 0.0)
        throw std::invalid_argument("experiment: dt or t_f must be positive");
    return cfg;
}

// ---------------------------------------------------------------------------
// SVG output. Hand-rolled so the figure files are dependency-free and byte
// stable. Heatmaps use the fixed color table below (position, r, g, b),
// interpolated linearly in RGB.
// ---------------------------------------------------------------------------

namespace {

struct ColorStop {
    double t;
    int r, g, b;
};

// dark blue -> teal -> green -> yellow ramp
constexpr ColorStop kColormap[] = {
    {0.00, 68, 1, 84},   {0.14, 71, 44, 122}, {0.29, 59, 81, 139},  {0.43, 44, 113, 142},
    {0.57, 33, 144, 141}, {0.71, 39, 173, 129}, {0.86, 92, 200, 99}, {1.00, 253, 231, 37}};

std::string color_for(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int n = static_cast<int>(std::size(kColormap));
    int hi = 1;
    while (hi < n - 1 && kColormap[hi].t < t) ++hi;
    const auto& a = kColormap[hi - 1];
    const auto& b = kColormap[hi];
    const double f = (t - a.t) / (b.t - a.t);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(a.r + f * (b.r - a.r))),
                  static_cast<int>(std::lround(a.g + f * (b.g - a.g))),
                  static_cast<int>(std::lround(a.b + f * (b.b - a.b))));
    return buf;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

void svg_line_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::string& title) {
    if (series.empty())
        throw std::invalid_argument("svg_line_chart: no series");
    const int width = 760, height = 480;
    const int ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (double v : *s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : *s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const auto X = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    const auto Y = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
       << "font-family=\"sans-serif\">" << title << "</text>\n";

    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<line x1=\"" << fmt2(X(xv)) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt2(X(xv))
           << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt2(X(xv)) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
           << fmt2(xv) << "</text>\n";
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt2(Y(yv)) << "\" x2=\"" << ml
           << "\" y2=\"" << fmt2(Y(yv)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 9 << "\" y=\"" << fmt2(Y(yv) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt2(yv)
           << "</text>\n";
    }
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt2(pw) << "\" height=\""
       << fmt2(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        os << "<polyline fill=\"none\" stroke=\"" << palette[si % 5]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x->size(); ++i)
            os << fmt2(X((*s.x)[i])) << "," << fmt2(Y((*s.y)[i])) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << ml + 12 << "\" y=\"" << mt + 18 + 16 * si
           << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << palette[si % 5] << "\">"
           << s.name << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
       << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << ylabel << "</text>\n";
    os << "</svg>\n";
    write_text(path, os.str());
}

void svg_heatmap(const std::filesystem::path& path, const LandscapeGrid& grid,
                 const std::string& title, int max_cells) {
    if (grid.axis2.empty())
        throw std::invalid_argument("svg_heatmap: grid is one-dimensional");
    const int n1 = static_cast<int>(grid.axis1.size());
    const int n2 = static_cast<int>(grid.axis2.size());
    const int pool1 = (n1 + max_cells - 1) / max_cells;
    const int pool2 = (n2 + max_cells - 1) / max_cells;
    const int c1 = (n1 + pool1 - 1) / pool1;
    const int c2 = (n2 + pool2 - 1) / pool2;

    std::vector<double> pooled(static_cast<std::size_t>(c1) * c2, 0.0);
    std::vector<int> counts(pooled.size(), 0);
    for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n2; ++k) {
            const std::size_t idx = static_cast<std::size_t>(i / pool1) * c2 + (k / pool2);
            pooled[idx] += grid.values[static_cast<std::size_t>(i) * n2 + k];
            counts[idx] += 1;
        }
    double vmin = 1e300, vmax = -1e300;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        pooled[i] /= counts[i];
        vmin = std::min(vmin, pooled[i]);
        vmax = std::max(vmax, pooled[i]);
    }
    if (vmax <= vmin) vmax = vmin + 1;

    const int width = 640, height = 600;
    const int ml = 70, mr = 40, mt = 40, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const double cw = pw / c1, ch = ph / c2;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
       << "font-family=\"sans-serif\">" << title << " (J in [" << fmt2(vmin) << ", " << fmt2(vmax)
       << "])</text>\n";
    for (int i = 0; i < c1; ++i)
        for (int k = 0; k < c2; ++k) {
            const double v = (pooled[static_cast<std::size_t>(i) * c2 + k] - vmin) / (vmax - vmin);
            os << "<rect x=\"" << fmt2(ml + i * cw) << "\" y=\"" << fmt2(mt + ph - (k + 1) * ch)
               << "\" width=\"" << fmt2(cw + 0.5) << "\" height=\"" << fmt2(ch + 0.5)
               << "\" fill=\"" << color_for(v) << "\"/>\n";
        }
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt2(pw) << "\" height=\""
       << fmt2(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double xmax = grid.axis1.back() + (grid.axis1.size() > 1
                                                 ? grid.axis1[1] - grid.axis1[0]
                                                 : 0.0);
    const double ymax = grid.axis2.back() + (grid.axis2.size() > 1
                                                 ? grid.axis2[1] - grid.axis2[0]
                                                 : 0.0);
    for (int k = 0; k <= 4; ++k) {
        os << "<text x=\"" << fmt2(ml + pw * k / 4.0) << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
           << fmt2(grid.axis1.front() + (xmax - grid.axis1.front()) * k / 4.0) << "</text>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << fmt2(mt + ph - ph * k / 4.0 + 4)
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
           << fmt2(grid.axis2.front() + (ymax - grid.axis2.front()) * k / 4.0) << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
       << grid.axis_names[0] << "</text>\n";
    os << "<text x=\"18\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
       << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << grid.axis_names[1]
       << "</text>\n";
    os << "</svg>\n";
    write_text(path, os.str());
}

} // namespace qcl
