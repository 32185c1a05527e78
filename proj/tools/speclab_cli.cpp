// Command line front end. Every report is deterministic JSON (17 significant
// digits, sorted keys) stamped with the library version and the fully
// resolved configuration, so identical invocations produce identical bytes.
//
// Exit codes: 0 success, 1 command line parse error, 2 invalid configuration
// or input data, 3 I/O failure, 4 numerical failure. Errors are mirrored as a
// JSON object on stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speclab/speclab.hpp"

namespace fs = std::filesystem;
using speclab::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct CliError : std::runtime_error {
    int code;
    std::string kind;
    CliError(int c, std::string k, const std::string& msg)
        : std::runtime_error(msg), code(c), kind(std::move(k)) {}
};

// --out paths resolve against SPECLAB_OUT_DIR when it is set and the path is
// relative; empty --out means stdout.
fs::path resolve_out(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("SPECLAB_OUT_DIR")) p = fs::path(dir) / p;
    }
    return p;
}

void emit_report(const json& report, const std::string& out) {
    const std::string text = speclab::dump17(report);
    if (out.empty()) {
        std::cout << text << "\n";
        return;
    }
    const fs::path path = resolve_out(out);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw speclab::IoError("cannot open " + path.string());
    f << text << "\n";
    if (!f) throw speclab::IoError("write failed for " + path.string());
}

speclab::Field load_field_checked(const std::string& path) {
    return speclab::load_field(resolve_out(path));
}

json grid_json(const speclab::Grid1D& g) { return {{"n", g.n}, {"length", g.length}}; }

json stamp(const char* command, json config) {
    return {{"version", speclab::kVersion}, {"command", command}, {"config", std::move(config)}};
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CliError(kExitConfig, "config",
                           std::string(what) + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty())
        throw CliError(kExitConfig, "config", std::string(what) + ": empty list");
    return out;
}

// ---- subcommand payloads ---------------------------------------------------

int run_field_info(const std::string& field_path, const std::string& out) {
    speclab::Field f = load_field_checked(field_path);
    json rep = stamp("field-info", {{"field", field_path}});
    rep["grid"] = grid_json(f.grid);
    rep["shape"] = {f.rows, f.cols};
    rep["l2"] = speclab::lp_norm(f, 2.0);
    rep["linf"] = speclab::lp_norm(f, std::numeric_limits<double>::infinity());
    rep["h12"] = speclab::sobolev_norm(f, 0.5);
    rep["component_means"] = speclab::component_means(f);
    if (f.cols == 1) rep["sphere_defect"] = speclab::on_sphere_defect(f);
    emit_report(rep, out);
    return kExitOk;
}

int run_lp_decompose(const std::string& field_path, const std::string& out) {
    speclab::Field f = load_field_checked(field_path);
    if (!f.is_scalar())
        throw CliError(kExitConfig, "config", "lp-decompose expects a scalar field");
    speclab::LPDecomposition dec = speclab::lp_blocks(f);
    json rep = stamp("lp-decompose", {{"field", field_path}});
    rep["grid"] = grid_json(f.grid);
    json blocks = json::array();
    blocks.push_back({{"j", "lowpass"},
                      {"linf", speclab::lp_norm(dec.lowpass, std::numeric_limits<double>::infinity())},
                      {"l2", speclab::lp_norm(dec.lowpass, 2.0)}});
    for (const auto& [j, b] : dec.blocks)
        blocks.push_back({{"j", j},
                          {"linf", speclab::lp_norm(b, std::numeric_limits<double>::infinity())},
                          {"l2", speclab::lp_norm(b, 2.0)}});
    rep["blocks"] = blocks;
    rep["besov_b0_infinf"] = speclab::besov_b0_infinf_norm(f);
    rep["hardy_h1"] = speclab::hardy_h1_norm(f);
    rep["bmo"] = speclab::bmo_norm(f);
    const double rec =
        speclab::max_abs(speclab::lp_reconstruct(dec) - f);
    rep["reconstruction_error"] = rec;
    emit_report(rep, out);
    return kExitOk;
}

int run_op_norms(const std::string& op, const speclab::EnsembleConfig& cfg,
                 const std::string& norms, const std::string& out) {
    speclab::OperatorReport report;
    try {
        report = speclab::estimate_constant(op, norms, cfg);
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, "config", e.what());
    }
    json rep = stamp("op-norms", {{"op", op},
                                  {"norms", norms},
                                  {"n", cfg.n},
                                  {"length", cfg.length},
                                  {"seed", cfg.seed},
                                  {"count", cfg.count},
                                  {"band", cfg.band},
                                  {"amplitude", cfg.amplitude}});
    rep["report"] = speclab::to_json(report);
    emit_report(rep, out);
    return kExitOk;
}

int run_gauge_solve(const std::string& omega_path, int m, const std::string& out_field,
                    const std::string& report_path, const speclab::GaugeConfig& config) {
    speclab::Field omega = load_field_checked(omega_path);
    if (omega.rows != m || omega.cols != m)
        throw CliError(kExitConfig, "config",
                       "gauge-solve: field is " + std::to_string(omega.rows) + "x" +
                           std::to_string(omega.cols) + ", requested m=" + std::to_string(m));
    speclab::GaugeProblem problem{std::move(omega)};
    speclab::GaugeResult result;
    try {
        result = speclab::construct_gauge(problem, config);
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, "config", e.what());
    }
    if (!result.converged)
        throw CliError(kExitNumerical, "numerical",
                       "gauge-solve: homotopy stalled before reaching the target connection");

    if (!out_field.empty()) speclab::save_field(result.p, resolve_out(out_field));

    json rep = stamp("gauge-solve", {{"omega", omega_path},
                                     {"m", m},
                                     {"budget", config.smallness_budget},
                                     {"tol_scale", config.tol_scale},
                                     {"max_newton", config.max_newton},
                                     {"min_ds", config.min_ds},
                                     {"out", out_field}});
    rep["grid"] = grid_json(problem.omega.grid);
    rep["converged"] = result.converged;
    rep["constant_c"] = result.constant_c;
    rep["constant_mode_residual"] = result.constant_mode_residual;
    rep["residual_history"] = result.residual_history;
    rep["homotopy_path"] = result.homotopy_path;
    rep["final_residual"] =
        speclab::lp_norm(speclab::gauge_residual(result.p, problem.omega), 2.0);
    rep["orthogonality_defect"] = speclab::orthogonality_defect(result.p);
    speclab::GaugeBoundsReport bounds = speclab::verify_gauge_bounds(result, problem);
    rep["bounds"] = {{"degenerate", bounds.degenerate},
                     {"energy_ratio", bounds.energy_ratio},
                     {"symm_over_asymm", bounds.symm_over_asymm},
                     {"c_max", bounds.c_max},
                     {"violates_c_max", bounds.violates_c_max}};
    emit_report(rep, report_path);
    return kExitOk;
}

int run_flow(const std::string& target, int n, std::uint64_t seed, double amplitude, int band,
             int max_steps, double el_tol, const std::string& field_path,
             const std::string& out, const std::string& final_field) {
    speclab::Field u0;
    if (!field_path.empty()) {
        u0 = load_field_checked(field_path);
    } else {
        speclab::Grid1D g = speclab::Grid1D::make(n, 2.0 * std::numbers::pi);
        if (target == "s1") {
            u0 = speclab::perturbed_winding(g, 1, seed, amplitude, band);
        } else if (target == "s2") {
            u0 = speclab::perturbed_equator(g, seed, amplitude, band);
        } else {
            throw CliError(kExitConfig, "config", "flow: target must be s1 or s2");
        }
    }
    speclab::FlowConfig cfg;
    cfg.max_steps = max_steps;
    cfg.el_tol = el_tol;
    speclab::FlowTrace trace = speclab::run_flow(u0, cfg);

    if (!final_field.empty()) speclab::save_field(trace.u, resolve_out(final_field));

    json rep = stamp("flow", {{"target", target},
                              {"n", n},
                              {"seed", seed},
                              {"amplitude", amplitude},
                              {"band", band},
                              {"max_steps", max_steps},
                              {"el_tol", el_tol},
                              {"field", field_path}});
    rep["grid"] = grid_json(u0.grid);
    rep["reached_tol"] = trace.reached_tol;
    rep["stop_reason"] = trace.stop_reason;
    rep["final_energy"] = trace.final_energy;
    rep["final_el_norm"] = trace.final_el_norm;
    rep["accepted_steps"] = trace.steps.size() - 1;
    json steps = json::array();
    for (const auto& s : trace.steps)
        steps.push_back({{"energy", s.energy}, {"el_norm", s.el_norm}, {"tau", s.tau}});
    rep["steps"] = steps;
    emit_report(rep, out);
    return kExitOk;
}

int run_verify_el(const std::string& field_path, const std::string& out) {
    speclab::Field u = load_field_checked(field_path);
    try {
        speclab::require_on_sphere(u, "verify-el input");
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, "config", e.what());
    }
    json rep = stamp("verify-el", {{"field", field_path}});
    rep["grid"] = grid_json(u.grid);
    rep["energy"] = speclab::energy(u);
    rep["el_l2"] = speclab::lp_norm(speclab::el_residual(u), 2.0);
    rep["wedge_l2"] = speclab::lp_norm(speclab::wedge_residual(u), 2.0);
    rep["commutator_l2"] = speclab::lp_norm(speclab::el_commutator_residual(u), 2.0);
    rep["structure_l2"] = speclab::lp_norm(speclab::structure_identity_residual(u), 2.0);

    json systems = json::object();
    const struct {
        const char* name;
        speclab::Omega3Form form;
        speclab::SystemBlocks blocks;
    } variants[] = {
        {"derived_plain", speclab::Omega3Form::kPlain, speclab::SystemBlocks::kDerived},
        {"derived_resmoothed", speclab::Omega3Form::kResmoothed, speclab::SystemBlocks::kDerived},
        {"printed_plain", speclab::Omega3Form::kPlain, speclab::SystemBlocks::kPrinted},
    };
    for (const auto& v : variants) {
        speclab::SystemAssembly sys = speclab::assemble_system(u, v.form, v.blocks);
        const double ref = speclab::lp_norm(speclab::fractional_laplacian(sys.v, 0.25), 2.0);
        systems[v.name] = {
            {"residual_l2", speclab::lp_norm(sys.residual, 2.0)},
            {"reference_l2", ref},
            {"omega_antisymmetry", speclab::max_abs(sys.omega + speclab::transpose(sys.omega))}};
    }
    rep["system"] = systems;
    emit_report(rep, out);
    return kExitOk;
}

int run_morrey(const std::string& field_path, double beta, int centers, const std::string& radii,
               double x0, const std::string& out) {
    speclab::Field f = load_field_checked(field_path);
    std::vector<double> rs = parse_double_list(radii, "morrey radii");
    std::vector<double> cs;
    if (centers < 1) throw CliError(kExitConfig, "config", "morrey: centers must be >= 1");
    for (int i = 0; i < centers; ++i) cs.push_back(i * f.grid.length / centers);

    speclab::MorreyProfile profile;
    speclab::AnnularProfile annular;
    try {
        profile = speclab::morrey_profile(f, beta, cs, rs);
        annular = speclab::annular_l2weak_profile(f, x0, rs.front());
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, "config", e.what());
    }

    json rep = stamp("morrey", {{"field", field_path},
                                {"beta", beta},
                                {"centers", centers},
                                {"radii", radii},
                                {"x0", x0}});
    rep["grid"] = grid_json(f.grid);
    rep["supremum"] = profile.supremum;
    json entries = json::array();
    for (const auto& e : profile.entries)
        entries.push_back({{"center", e.center}, {"radius", e.radius}, {"value", e.value}});
    rep["entries"] = entries;
    json ann = json::array();
    for (const auto& e : annular.entries)
        ann.push_back({{"h", e.h},
                       {"inner_radius", e.inner_radius},
                       {"outer_radius", e.outer_radius},
                       {"l2weak", e.l2weak}});
    rep["annular"] = {{"x0", annular.x0}, {"r", annular.r}, {"entries", ann},
                      {"weighted_sum", annular.weighted_sum}};

    // supremum decay across the radius ladder, per centre with the best fit
    if (rs.size() >= 2) {
        std::vector<double> per_radius(rs.size(), 0.0);
        for (const auto& e : profile.entries)
            for (std::size_t ri = 0; ri < rs.size(); ++ri)
                if (e.radius == rs[ri]) per_radius[ri] = std::max(per_radius[ri], e.value);
        try {
            speclab::DecayFit fit = speclab::fit_power_law(rs, per_radius);
            rep["decay_fit"] = {{"beta_hat", fit.beta_hat},
                                {"log_c", fit.log_c},
                                {"r_squared", fit.r_squared},
                                {"points_used", fit.points_used}};
        } catch (const std::invalid_argument&) {
            rep["decay_fit"] = nullptr;
        }
    }
    emit_report(rep, out);
    return kExitOk;
}

void print_error(int code, const std::string& kind, const std::string& message) {
    json err = {{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
    std::cerr << speclab::dump17(err) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for nonlocal maps on the circle"};
    app.require_subcommand(1);
    app.set_version_flag("--version", speclab::kVersion);

    std::string field_path, out, norms = "default", op = "N", target = "s1";
    std::string omega_path, out_field, report_path, radii = "0.05,0.1,0.2,0.4", final_field;
    int n = 256, m = 3, centers = 8, max_steps = 10000, band = 8, count = 100;
    std::uint64_t seed = 7;
    double amplitude = 0.1, el_tol = 1e-6, beta = 0.25, x0 = 0.0;
    double ens_amplitude = 1.0, length = 2.0 * std::numbers::pi;

    auto* c_info = app.add_subcommand("field-info", "grid, shape and norms of a stored field");
    c_info->add_option("--field", field_path, "field manifest path")->required();
    c_info->add_option("--out", out, "report path (stdout when omitted)");

    auto* c_lp = app.add_subcommand("lp-decompose", "dyadic block decomposition of a scalar field");
    c_lp->add_option("--field", field_path, "field manifest path")->required();
    c_lp->add_option("--out", out, "report path (stdout when omitted)");

    auto* c_ops = app.add_subcommand("op-norms", "empirical operator constants over an ensemble");
    c_ops->add_option("--op", op, "one of N,T,S,Stilde,R,F,Fstar")->required();
    c_ops->add_option("--n", n, "grid size (power of two)");
    c_ops->add_option("--length", length, "period");
    c_ops->add_option("--seed", seed, "rng seed");
    c_ops->add_option("--count", count, "ensemble size");
    c_ops->add_option("--band", band, "excited band");
    c_ops->add_option("--amplitude", ens_amplitude, "field amplitude");
    c_ops->add_option("--norms", norms, "norm pairing (default uses the operator's table)");
    c_ops->add_option("--out", out, "report path (stdout when omitted)");

    speclab::GaugeConfig gauge_cfg;
    auto* c_gauge = app.add_subcommand("gauge-solve", "construct the rotation frame for a connection");
    c_gauge->add_option("--omega", omega_path, "antisymmetric m x m field")->required();
    c_gauge->add_option("--m", m, "matrix dimension")->required();
    c_gauge->add_option("--budget", gauge_cfg.smallness_budget, "admissible connection size");
    c_gauge->add_option("--tol-scale", gauge_cfg.tol_scale, "residual target scale");
    c_gauge->add_option("--max-newton", gauge_cfg.max_newton, "correction steps per stage");
    c_gauge->add_option("--min-ds", gauge_cfg.min_ds, "smallest homotopy step");
    c_gauge->add_option("--out", out_field, "output field for the frame");
    c_gauge->add_option("--report", report_path, "report path (stdout when omitted)");

    auto* c_flow = app.add_subcommand("flow", "projected half-harmonic gradient flow");
    c_flow->add_option("--target", target, "s1 or s2");
    c_flow->add_option("--n", n, "grid size (power of two)");
    c_flow->add_option("--seed", seed, "seed for the initial perturbation");
    c_flow->add_option("--amplitude", amplitude, "perturbation amplitude");
    c_flow->add_option("--band", band, "perturbation band");
    c_flow->add_option("--max-steps", max_steps, "step budget");
    c_flow->add_option("--el-tol", el_tol, "stopping tolerance on the defect norm");
    c_flow->add_option("--field", field_path, "explicit initial field (overrides --target)");
    c_flow->add_option("--final-field", final_field, "store the final map here");
    c_flow->add_option("--out", out, "trace path (stdout when omitted)");

    auto* c_el = app.add_subcommand("verify-el", "criticality and system residuals of a stored map");
    c_el->add_option("--field", field_path, "unit-length column field")->required();
    c_el->add_option("--out", out, "report path (stdout when omitted)");

    auto* c_mor = app.add_subcommand("morrey", "ball growth profile and annular decomposition");
    c_mor->add_option("--field", field_path, "field manifest path")->required();
    c_mor->add_option("--beta", beta, "growth exponent in (0, 1/2)");
    c_mor->add_option("--centers", centers, "number of equispaced ball centres");
    c_mor->add_option("--radii", radii, "comma separated radius ladder");
    c_mor->add_option("--x0", x0, "centre for the annular profile");
    c_mor->add_option("--out", out, "report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error(kExitParse, "parse", e.what());
        return kExitParse;
    }

    try {
        if (c_info->parsed()) return run_field_info(field_path, out);
        if (c_lp->parsed()) return run_lp_decompose(field_path, out);
        if (c_ops->parsed()) {
            speclab::EnsembleConfig cfg;
            cfg.n = n;
            cfg.length = length;
            cfg.seed = seed;
            cfg.count = count;
            cfg.band = band;
            cfg.amplitude = ens_amplitude;
            return run_op_norms(op, cfg, norms, out);
        }
        if (c_gauge->parsed()) return run_gauge_solve(omega_path, m, out_field, report_path, gauge_cfg);
        if (c_flow->parsed())
            return run_flow(target, n, seed, amplitude, band, max_steps, el_tol, field_path, out,
                            final_field);
        if (c_el->parsed()) return run_verify_el(field_path, out);
        if (c_mor->parsed()) return run_morrey(field_path, beta, centers, radii, x0, out);
        print_error(kExitParse, "parse", "no subcommand selected");
        return kExitParse;
    } catch (const CliError& e) {
        print_error(e.code, e.kind, e.what());
        return e.code;
    } catch (const speclab::IoError& e) {
        print_error(kExitIo, "io", e.what());
        return kExitIo;
    } catch (const speclab::LinearSolveError& e) {
        print_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        print_error(kExitConfig, "config", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        print_error(kExitConfig, "config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        print_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    }
}
