// qcl: gate-fidelity control landscapes under restricted dynamical symmetry.
//
// Subcommands evaluate characters, scan landscapes, locate critical points,
// run Riemannian/GRAPE ascents and regenerate the standard figure data sets.

#include "qcl/report_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <numbers>

namespace {

using namespace qcl;
namespace fs = std::filesystem;

fs::path out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QCL_OUT_DIR"); env && *env) return env;
    return ".";
}

Mat parse_target_matrix(const std::string& text, int dim) {
    if (text == "identity" || text.empty())
        return Mat::Identity(dim, dim);
    if (text.rfind("diag:", 0) == 0) {
        std::vector<double> entries;
        std::stringstream ss(text.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ','))
            entries.push_back(std::stod(tok));
        if (static_cast<int>(entries.size()) != dim)
            throw std::invalid_argument("target diag length does not match dimension");
        Mat w = Mat::Zero(dim, dim);
        for (int k = 0; k < dim; ++k)
            w(k, k) = entries[k];
        return w;
    }
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw std::invalid_argument("cannot open target file " + text.substr(1));
        json j;
        in >> j;
        return mat_from_json(j.contains("target") ? j["target"] : j);
    }
    throw std::invalid_argument("target must be 'identity', 'diag:a,b,...' or '@file.json'");
}

OperatorBasis spin_algebra(const SpinOperators& ops) {
    const Complex i(0, 1);
    return orthonormalize({i * ops.jx, i * ops.jy, i * ops.jz});
}

json resolved(std::initializer_list<std::pair<std::string, json>> kv) {
    json j;
    for (const auto& [k, v] : kv)
        j[k] = v;
    return j;
}

int cmd_character(const std::string& label_text, double beta, double t1, double t2) {
    const Irrep label = parse_irrep(label_text);
    const TorusPoint p = label.group == Irrep::Group::SU2 ? TorusPoint(beta) : TorusPoint(t1, t2);
    const Complex chi = irrep_character(label, p);
    json j;
    j["label"] = label.name();
    j["dimension"] = label.dim();
    j["point"] = p.angles;
    j["chi"] = {chi.real(), chi.imag()};
    j["abs_chi"] = std::abs(chi);
    j["J"] = fidelity_from_character(label, p);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_scan(const Irrep& label, int resolution, const fs::path& dir, std::string stem) {
    const LandscapeGrid grid = scan_landscape(label, resolution);
    if (stem.empty()) {
        stem = (label.group == Irrep::Group::SU2 ? "scan_su2_" : "scan_su3_");
        for (char c : label.name())
            stem += (c == ':' || c == ',' || c == '/' || c == '=') ? '_' : c;
    }
    const json cfg = resolved({{"command", label.group == Irrep::Group::SU2 ? "scan-su2" : "scan-su3"},
                               {"label", label.name()},
                               {"resolution", resolution}});
    write_grid_csv(dir / (stem + ".csv"), grid);
    write_json(dir / (stem + ".json"), grid_to_json(grid, cfg));
    std::cout << "wrote " << (dir / (stem + ".csv")).string() << " and .json ("
              << grid.values.size() << " values)\n";
    return 0;
}

int cmd_critical(const std::string& label_text, int resolution, double refine_tol,
                 const fs::path& dir, std::string stem) {
    const Irrep label = parse_irrep(label_text);
    const CriticalReport report = label.group == Irrep::Group::SU2
                                      ? critical_points_su2(label.spin, refine_tol)
                                      : critical_points_torus(label, resolution, refine_tol);
    json j = critical_report_to_json(report);
    j["config"] = resolved({{"command", "critical"},
                            {"label", label.name()},
                            {"resolution", resolution},
                            {"refine_tol", refine_tol}});
    if (stem.empty()) {
        stem = "critical_";
        for (char c : label.name())
            stem += (c == ':' || c == ',' || c == '/' || c == '=') ? '_' : c;
    }
    write_json(dir / (stem + ".json"), j);
    write_text(dir / (stem + ".txt"), critical_report_table(report));
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_euler_scan(const std::string& j_text, const std::string& target_text, int resolution,
                   const fs::path& dir, std::string stem) {
    const Spin j = parse_spin(j_text);
    const SpinOperators ops = build_spin_operators(j);
    const Mat wmat = parse_target_matrix(target_text, j.dim());
    TargetGate target = TargetGate::external(wmat);
    if ((wmat - Mat::Identity(j.dim(), j.dim())).norm() < 1e-12)
        target.realizable = true;
    const LandscapeGrid grid = reduced_scan(ops, target, resolution);

    double max_j = 0.0;
    for (double v : grid.values)
        max_j = std::max(max_j, v);
    if (stem.empty()) stem = "euler_scan_j" + std::to_string(j.two_j) + "_2";
    const json cfg = resolved({{"command", "euler-scan"},
                               {"j", j_text},
                               {"target", target_text},
                               {"resolution", resolution}});
    write_grid_csv(dir / (stem + ".csv"), grid);
    json meta = grid_to_json(grid, cfg);
    meta["max_J"] = max_j;
    write_json(dir / (stem + ".json"), meta);
    std::cout << "max J over scan: " << max_j << "\n";
    return 0;
}

int cmd_kinematic_flow(const std::string& j_text, const std::string& target_text, int starts,
                       std::uint64_t seed, double tol, const fs::path& dir, std::string stem) {
    const Spin j = parse_spin(j_text);
    const SpinOperators ops = build_spin_operators(j);
    const OperatorBasis algebra = spin_algebra(ops);
    const Mat wmat = parse_target_matrix(target_text, j.dim());
    TargetGate target = TargetGate::external(wmat);
    target.realizable = probe_realizable(wmat, algebra, 16, seed ^ 0xabcdULL);

    AscentConfig cfg;
    cfg.residual_tol = tol;
    const auto flows = multi_start_ascent(target, algebra, starts, seed, cfg);

    json out;
    out["config"] = resolved({{"command", "kinematic-flow"},
                              {"j", j_text},
                              {"target", target_text},
                              {"starts", starts},
                              {"seed", seed},
                              {"residual_tol", tol},
                              {"target_realizable", target.realizable}});
    out["flows"] = flow_results_to_json(flows, seed);
    if (stem.empty()) stem = "kinematic_flow_j" + std::to_string(j.two_j) + "_2";
    write_json(dir / (stem + ".json"), out);

    int converged = 0, at_global = 0;
    for (const auto& f : flows) {
        converged += f.converged;
        at_global += f.final_J > 1.0 - 1e-6;
    }
    std::cout << "starts=" << starts << " converged=" << converged
              << " reached_global=" << at_global << "\n";
    return 0;
}

int cmd_grape(const fs::path& problem_path, const fs::path& dir, std::string stem) {
    const Problem prob = parse_problem_file(problem_path);
    if (!prob.target)
        throw std::invalid_argument("grape: problem file must carry a 'target' matrix");
    const TargetGate target = TargetGate::external(*prob.target);
    const GrapeConfig cfg = grape_config_from(prob.experiment, prob.system);
    const auto outcomes = run_grape(prob.system, target, cfg);

    if (stem.empty()) stem = problem_path.stem().string() + "_outcomes";
    write_grape_jsonl(dir / (stem + ".jsonl"), outcomes);

    json meta;
    meta["config"] = resolved({{"command", "grape"},
                               {"problem", problem_path.string()},
                               {"starts", cfg.starts},
                               {"steps", cfg.steps},
                               {"dt", cfg.dt},
                               {"t_f", cfg.dt * cfg.steps},
                               {"amp_init_range", cfg.amp_init_range},
                               {"amp_bound", cfg.amp_bound},
                               {"grad_tol", cfg.grad_tol},
                               {"max_iterations", cfg.max_iterations},
                               {"seed", cfg.seed}});
    int converged = 0;
    double best = 0.0;
    for (const auto& o : outcomes) {
        converged += o.converged;
        best = std::max(best, o.final_J);
    }
    meta["converged"] = converged;
    meta["best_J"] = best;
    write_json(dir / (stem + ".meta.json"), meta);
    std::cout << "runs=" << outcomes.size() << " converged=" << converged << " best_J=" << best
              << "\n";
    return 0;
}

int cmd_controllability(const fs::path& problem_path) {
    const Problem prob = parse_problem_file(problem_path);
    const LieClosureResult closure = controllability(prob.system);
    json j = closure_to_json(closure);
    j["config"] = resolved({{"command", "controllability"}, {"problem", problem_path.string()}});
    std::cout << j.dump(2) << "\n";
    return 0;
}

void emit_fig1(const fs::path& dir) {
    const Irrep d3 = Irrep::su2(Spin(6)), d72 = Irrep::su2(Spin(7));
    const LandscapeGrid g3 = scan_landscape(d3, 1024);
    const LandscapeGrid g72 = scan_landscape(d72, 1024);
    write_grid_csv(dir / "fig1_d3.csv", g3);
    write_grid_csv(dir / "fig1_d7_2.csv", g72);
    svg_line_chart(dir / "fig1.svg",
                   {{"D_3 (N=7)", &g3.axis1, &g3.values}, {"D_7/2 (N=8)", &g72.axis1, &g72.values}},
                   "beta", "J", "character landscapes on [0, pi/2]");
    json meta;
    meta["config"] = resolved({{"command", "figures"}, {"which", "fig1"}, {"resolution", 1024}});
    meta["local_maxima"] = {
        {"su2:j=3", critical_points_su2(Spin(6)).count(CriticalPoint::Kind::LocalMax)},
        {"su2:j=7/2", critical_points_su2(Spin(7)).count(CriticalPoint::Kind::LocalMax)}};
    write_json(dir / "fig1.json", meta);
}

void emit_fig2(const fs::path& dir, int resolution) {
    const Spin j72(7);
    const SpinOperators ops = build_spin_operators(j72);
    TargetGate identity = TargetGate::external(Mat::Identity(8, 8));
    identity.realizable = true;
    Mat wb = Mat::Identity(8, 8);
    wb(0, 0) = -1.0;
    const TargetGate flipped = TargetGate::external(wb);

    const LandscapeGrid ga = reduced_scan(ops, identity, resolution);
    const LandscapeGrid gb = reduced_scan(ops, flipped, resolution);
    write_grid_csv(dir / "fig2a.csv", ga);
    write_grid_csv(dir / "fig2b.csv", gb);
    svg_heatmap(dir / "fig2a.svg", ga, "J(theta, phi), W = I_8");
    svg_heatmap(dir / "fig2b.svg", gb, "J(theta, phi), W = diag(-1,1,...,1)");

    double max_a = 0.0, max_b = 0.0;
    for (double v : ga.values) max_a = std::max(max_a, v);
    for (double v : gb.values) max_b = std::max(max_b, v);

    // Panel (a) critical structure on the grid: count distinct critical
    // values and connected near-critical components (both conventions).
    int components = 0;
    std::vector<double> crit_values;
    {
        const int res = resolution;
        std::vector<char> flagged(static_cast<std::size_t>(res) * res, 0);
        const auto at = [&](int i, int k) {
            return ga.values[static_cast<std::size_t>((i + res) % res) * res + ((k + res) % res)];
        };
        for (int i = 0; i < res; ++i)
            for (int k = 0; k < res; ++k) {
                const double v = at(i, k);
                bool lmax = true, lmin = true;
                for (int di = -1; di <= 1; ++di)
                    for (int dk = -1; dk <= 1; ++dk) {
                        if (!di && !dk) continue;
                        if (at(i + di, k + dk) > v) lmax = false;
                        if (at(i + di, k + dk) < v) lmin = false;
                    }
                if (lmax || lmin) {
                    flagged[static_cast<std::size_t>(i) * res + k] = 1;
                    bool seen = false;
                    for (double cv : crit_values)
                        if (std::abs(cv - v) < 1e-6) seen = true;
                    if (!seen) crit_values.push_back(v);
                }
            }
        // flood fill over flagged cells (torus neighborhood)
        std::vector<char> visited(flagged.size(), 0);
        std::vector<std::pair<int, int>> stack;
        for (int i = 0; i < res; ++i)
            for (int k = 0; k < res; ++k) {
                const std::size_t idx = static_cast<std::size_t>(i) * res + k;
                if (!flagged[idx] || visited[idx]) continue;
                ++components;
                stack.push_back({i, k});
                visited[idx] = 1;
                while (!stack.empty()) {
                    const auto [ci, ck] = stack.back();
                    stack.pop_back();
                    for (int di = -1; di <= 1; ++di)
                        for (int dk = -1; dk <= 1; ++dk) {
                            const int ni = (ci + di + res) % res, nk = (ck + dk + res) % res;
                            const std::size_t nidx = static_cast<std::size_t>(ni) * res + nk;
                            if (flagged[nidx] && !visited[nidx]) {
                                visited[nidx] = 1;
                                stack.push_back({ni, nk});
                            }
                        }
                }
            }
    }

    json meta;
    meta["config"] = resolved({{"command", "figures"},
                               {"which", "fig2"},
                               {"j", "7/2"},
                               {"resolution", resolution}});
    meta["max_J_panel_a"] = max_a;
    meta["max_J_panel_b"] = max_b;
    meta["panel_a_distinct_critical_values"] = crit_values.size();
    meta["panel_a_critical_components"] = components;
    write_json(dir / "fig2.json", meta);
}

void emit_fig3(const fs::path& dir, int resolution) {
    const Irrep d7 = Irrep::su2(Spin(14));
    const Irrep su3_61 = Irrep::su3(6, 1);
    const Irrep su3_52 = Irrep::su3(5, 2);

    // heatmap panels: (theta, phi) reduced landscape for the SU(2) member,
    // class-angle torus scans for the SU(3) members
    {
        const SpinOperators ops = build_spin_operators(Spin(14));
        TargetGate identity = TargetGate::external(Mat::Identity(15, 15));
        identity.realizable = true;
        const LandscapeGrid ga = reduced_scan(ops, identity, std::min(resolution, 384));
        write_grid_csv(dir / "fig3a_d7.csv", ga);
        svg_heatmap(dir / "fig3a_d7.svg", ga, "D_7 reduced landscape, W = I_15");
    }
    for (const auto& [label, stem] :
         {std::pair{su3_61, std::string("fig3b_su3_6_1")}, {su3_52, "fig3c_su3_5_2"}}) {
        const LandscapeGrid g = scan_landscape(label, std::min(resolution, 384));
        write_grid_csv(dir / (stem + ".csv"), g);
        svg_heatmap(dir / (stem + ".svg"), g, "J on the torus, " + label.name());
    }

    const RuggednessSummary summary = ruggedness_compare({d7, su3_61, su3_52}, 384, 1000, 1);
    json meta = ruggedness_to_json(summary);
    meta["config"] = resolved({{"command", "figures"},
                               {"which", "fig3"},
                               {"resolution", resolution}});
    write_json(dir / "fig3.json", meta);
}

int cmd_figures(const std::string& which, int resolution, const fs::path& dir) {
    bool any = false;
    if (which == "fig1" || which == "all") {
        emit_fig1(dir);
        any = true;
    }
    if (which == "fig2" || which == "all") {
        emit_fig2(dir, std::max(resolution, 512));
        any = true;
    }
    if (which == "fig3" || which == "all") {
        emit_fig3(dir, std::max(resolution, 384));
        any = true;
    }
    if (!any)
        throw std::invalid_argument("figures: --which must be fig1, fig2, fig3 or all");
    std::cout << "figure data written to " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum gate-fidelity control landscapes under SU(2)/SU(3) dynamical symmetry"};
    app.require_subcommand(1);
    std::string outdir_flag;
    app.add_option("--outdir", outdir_flag, "output directory (default $QCL_OUT_DIR or .)");

    // character
    std::string ch_label = "su2:j=1/2";
    double ch_beta = 0.0, ch_t1 = 0.0, ch_t2 = 0.0;
    auto* ch = app.add_subcommand("character", "evaluate chi and J at a torus point");
    ch->add_option("--label", ch_label, "irrep label, e.g. su2:j=3 or su3:r1=6,r2=1")->required();
    ch->add_option("--beta", ch_beta, "SU(2) class angle");
    ch->add_option("--theta1", ch_t1, "SU(3) first angle");
    ch->add_option("--theta2", ch_t2, "SU(3) second angle");

    // scan-su2 / scan-su3
    std::string s2_j = "3";
    int s2_res = 1024;
    std::string s2_out;
    auto* s2 = app.add_subcommand("scan-su2", "landscape scan over beta in [0, pi/2]");
    s2->add_option("--j", s2_j, "spin (integer, fraction like 7/2, or decimal)")->required();
    s2->add_option("--resolution", s2_res, "grid points");
    s2->add_option("--out", s2_out, "output stem");

    int s3_r1 = 6, s3_r2 = 1, s3_res = 256;
    std::string s3_out;
    auto* s3 = app.add_subcommand("scan-su3", "landscape scan over the SU(3) torus");
    s3->add_option("--r1", s3_r1)->required();
    s3->add_option("--r2", s3_r2)->required();
    s3->add_option("--resolution", s3_res, "grid points per angle");
    s3->add_option("--out", s3_out, "output stem");

    // critical
    std::string cr_label;
    int cr_res = 512;
    double cr_tol = 0.0;
    std::string cr_out;
    auto* cr = app.add_subcommand("critical", "critical point report for a label");
    cr->add_option("--label", cr_label)->required();
    cr->add_option("--resolution", cr_res, "torus scan resolution (SU(3))");
    cr->add_option("--refine-tol", cr_tol, "refinement tolerance");
    cr->add_option("--out", cr_out, "output stem");

    // euler-scan
    std::string es_j = "7/2", es_target = "identity", es_out;
    int es_res = 512;
    auto* es = app.add_subcommand("euler-scan", "reduced (theta, phi) scan for [W, Jz] = 0");
    es->add_option("--j", es_j)->required();
    es->add_option("--target", es_target, "identity | diag:a,b,... | @file.json");
    es->add_option("--resolution", es_res);
    es->add_option("--out", es_out, "output stem");

    // kinematic-flow
    std::string kf_j = "3", kf_target = "identity", kf_out;
    int kf_starts = 200;
    std::uint64_t kf_seed = 1;
    double kf_tol = 1e-8;
    auto* kf = app.add_subcommand("kinematic-flow", "multi-start Riemannian ascent on the group");
    kf->add_option("--j", kf_j)->required();
    kf->add_option("--target", kf_target);
    kf->add_option("--starts", kf_starts);
    kf->add_option("--seed", kf_seed);
    kf->add_option("--tol", kf_tol, "residual tolerance");
    kf->add_option("--out", kf_out, "output stem");

    // grape
    std::string gp_problem, gp_out;
    auto* gp = app.add_subcommand("grape", "multi-start GRAPE from a JSON problem file");
    gp->add_option("--problem", gp_problem, "problem JSON path")->required();
    gp->add_option("--out", gp_out, "output stem");

    // controllability
    std::string ct_problem;
    auto* ct = app.add_subcommand("controllability", "Lie-closure controllability test");
    ct->add_option("--problem", ct_problem, "problem JSON path")->required();

    // figures
    std::string fg_which = "all";
    int fg_res = 512;
    auto* fg = app.add_subcommand("figures", "regenerate figure data (CSV + SVG)");
    fg->add_option("--which", fg_which, "fig1 | fig2 | fig3 | all");
    fg->add_option("--resolution", fg_res);

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path dir = out_dir(outdir_flag);
        std::filesystem::create_directories(dir);
        if (ch->parsed()) return cmd_character(ch_label, ch_beta, ch_t1, ch_t2);
        if (s2->parsed()) return cmd_scan(Irrep::su2(parse_spin(s2_j)), s2_res, dir, s2_out);
        if (s3->parsed()) return cmd_scan(Irrep::su3(s3_r1, s3_r2), s3_res, dir, s3_out);
        if (cr->parsed()) {
            const Irrep label = parse_irrep(cr_label);
            const double tol = cr_tol > 0.0 ? cr_tol
                               : label.group == Irrep::Group::SU2 ? 1e-6
                                                                  : 1e-4;
            return cmd_critical(cr_label, cr_res, tol, dir, cr_out);
        }
        if (es->parsed()) return cmd_euler_scan(es_j, es_target, es_res, dir, es_out);
        if (kf->parsed())
            return cmd_kinematic_flow(kf_j, kf_target, kf_starts, kf_seed, kf_tol, dir, kf_out);
        if (gp->parsed()) return cmd_grape(gp_problem, dir, gp_out);
        if (ct->parsed()) return cmd_controllability(ct_problem);
        if (fg->parsed()) return cmd_figures(fg_which, fg_res, dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const qcl::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
