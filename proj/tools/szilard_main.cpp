// Command-line front end: reproducible cycle ledgers, sweep CSVs, density
// maps and boundary-layer validation tables from one flat JSON config plus
// flag overrides (flags win).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "szilard/szilard.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace szilard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitSolver = 4;

struct RunConfig {
    double lx_nm = 20.0;
    double ly_nm = 10.0;
    double temp_k = 300.0;
    double grid_nm = 0.05;
    double cutoff_c = 40.0;
    int points = 41;
    int workers = 0;  // 0 = number of available processors
    std::string units = "kt";
    std::string out_dir = "out";
    bool deterministic = true;  // reserved; runs are random-free by construction
    double d_nm = 10.0;         // density command
    double l_nm = 10.0;
    std::vector<double> qbl_l_nm = {5.0, 10.0, 20.0, 50.0, 100.0, 200.0};
    std::vector<double> qbl_t_k = {100.0, 300.0, 1000.0};

    void load(const json& j) {
        lx_nm = j.value("lx_nm", lx_nm);
        ly_nm = j.value("ly_nm", ly_nm);
        temp_k = j.value("temp_k", temp_k);
        grid_nm = j.value("grid_nm", grid_nm);
        cutoff_c = j.value("cutoff_c", cutoff_c);
        points = j.value("points", points);
        workers = j.value("workers", workers);
        units = j.value("units", units);
        out_dir = j.value("out_dir", out_dir);
        deterministic = j.value("deterministic", deterministic);
        d_nm = j.value("d_nm", d_nm);
        l_nm = j.value("l_nm", l_nm);
        qbl_l_nm = j.value("qbl_l_nm", qbl_l_nm);
        qbl_t_k = j.value("qbl_t_k", qbl_t_k);
    }

    json to_json() const {
        return {{"lx_nm", lx_nm},     {"ly_nm", ly_nm},
                {"temp_k", temp_k},   {"grid_nm", grid_nm},
                {"cutoff_c", cutoff_c}, {"points", points},
                {"workers", workers}, {"units", units},
                {"out_dir", out_dir}, {"deterministic", deterministic},
                {"d_nm", d_nm},       {"l_nm", l_nm},
                {"qbl_l_nm", qbl_l_nm}, {"qbl_t_k", qbl_t_k}};
    }

    void validate() const {
        if (!(lx_nm > 0.0) || !(ly_nm > 0.0)) throw UsageError("box dimensions must be positive");
        if (!(temp_k > 0.0)) throw UsageError("temperature must be > 0 K");
        if (!(grid_nm > 0.0)) throw UsageError("grid spacing must be positive");
        if (!(cutoff_c >= 5.0)) throw UsageError("cutoff multiplier C must be at least 5");
        if (points < 1) throw UsageError("sweep needs at least one point");
        if (workers < 0) throw UsageError("workers must be >= 0");
        parse_energy_unit(units);
    }

    Geometry geometry() const {
        Geometry g;
        g.lx = lx_nm * 1e-9;
        g.ly = ly_nm * 1e-9;
        g.l = lx_nm * 1e-9 / 2.0;
        g.d = 0.0;
        return g;
    }
    GridSpec grid() const { return GridSpec{grid_nm * 1e-9, grid_nm * 1e-9}; }
    EnergyUnit unit() const { return parse_energy_unit(units); }
    int effective_workers() const {
        if (workers > 0) return workers;
        const unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? int(hc) : 1;
    }
};

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string canonical_config(const RunConfig& cfg) { return cfg.to_json().dump(); }

std::vector<std::string> file_prelude(const RunConfig& cfg, const std::string& command) {
    const PhysicalConstants c;
    return {std::string(kToolName) + " " + kToolVersion + " " + command,
            "config_hash=" + fnv1a_hex(canonical_config(cfg)),
            "constants: h=" + format_sig(c.h, 9) + " J s, k=" + format_sig(c.k, 7) +
                " J/K, m=" + format_sig(c.m, 11) + " kg",
            "config: " + canonical_config(cfg)};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot write output file: " + path.string());
    os << text;
}

json base_report(const RunConfig& cfg, const std::string& command) {
    return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
            {"command", command},
            {"config", cfg.to_json()},
            {"config_hash", fnv1a_hex(canonical_config(cfg))},
            {"constants", constants_json(PhysicalConstants{})}};
}

void finish_report(json& report, const fs::path& out_dir, const std::string& command,
                   double total_ms) {
    report["timings_ms"]["total"] = total_ms;
    write_file(out_dir / ("report_" + command + ".json"), report.dump(2) + "\n");
}

int cmd_cycle(const RunConfig& cfg) {
    Stopwatch watch;
    const PhysicalConstants c;
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);

    const auto source = analytic_1d_source(c, cfg.cutoff_c);
    const CycleLedger ledger = run_cycle(cfg.lx_nm * 1e-9, cfg.temp_k, source, c);
    const auto violations = ledger_violations(ledger, c);

    std::string text = ledger_text(ledger, cfg.unit(), c);
    for (const auto& line : file_prelude(cfg, "cycle")) text = "# " + line + "\n" + text;
    write_file(out / "ledger.txt", text);

    json jl = ledger_json(ledger);
    jl["config_hash"] = fnv1a_hex(canonical_config(cfg));
    jl["constants"] = constants_json(c);
    write_file(out / "ledger.json", jl.dump(2) + "\n");

    json report = base_report(cfg, "cycle");
    for (const auto& st : ledger.steps) report["results"]["steps"].push_back(step_exchange_json(st));
    report["results"]["net_extractable_work_J"] = ledger.net_extractable_work();
    report["results"]["invariant_violations"] = violations;
    finish_report(report, out, "cycle", watch.ms());

    std::cout << text;
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "ledger invariant failed: " << v << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const std::string& kind) {
    Stopwatch watch;
    const PhysicalConstants c;
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);

    SweepOptions opts;
    opts.cutoff_multiplier = cfg.cutoff_c;
    opts.workers = cfg.effective_workers();

    const Geometry base = cfg.geometry();
    SweepCurve curve;
    if (kind == "insert") {
        curve = sweep_insertion(base, cfg.temp_k, linspace(0.0, base.ly, cfg.points), cfg.grid(),
                                c, opts);
    } else {
        const bool localized = kind == "expand-localized";
        curve = sweep_expansion(base, cfg.temp_k, linspace(base.lx / 2.0, base.lx, cfg.points),
                                localized, cfg.grid(), c, opts);
    }

    const std::string stem = "sweep_" + std::string(kind == "insert" ? "insert"
                                                    : kind == "expand-superposed"
                                                        ? "expand_superposed"
                                                        : "expand_localized");
    const auto prelude = file_prelude(cfg, "sweep " + kind);
    write_file(out / (stem + ".csv"), sweep_curve_csv(curve, prelude));
    write_file(out / (stem + "_F.csv"), sweep_panel_csv(curve, 'F', prelude));
    write_file(out / (stem + "_S.csv"), sweep_panel_csv(curve, 'S', prelude));
    write_file(out / (stem + "_U.csv"), sweep_panel_csv(curve, 'U', prelude));

    json report = base_report(cfg, stem);
    int failures = 0;
    json points = json::array();
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i) {
        if (!curve.status[i].ok) ++failures;
        points.push_back({{"abscissa_nm", curve.abscissa[i] * 1e9},
                          {"ok", curve.status[i].ok},
                          {"message", curve.status[i].message}});
    }
    report["results"]["points"] = points;
    report["results"]["failed_points"] = failures;
    finish_report(report, out, stem, watch.ms());

    std::cout << stem << ": " << curve.abscissa.size() << " points, " << failures
              << " failed, wrote " << (out / (stem + ".csv")).string() << "\n";
    return failures == 0 ? kExitOk : kExitSolver;
}

int cmd_density(const RunConfig& cfg) {
    Stopwatch watch;
    const PhysicalConstants c;
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);

    Geometry g = cfg.geometry();
    g.d = cfg.d_nm * 1e-9;
    g.l = cfg.l_nm * 1e-9;
    g.validate();

    const double ground = box_ground_energy(g.lx, c) + box_ground_energy(g.ly, c);
    const double e_max = default_cutoff(ground, cfg.temp_k, c, cfg.cutoff_c);
    SolverOptions sopt;
    sopt.want_vectors = true;
    sopt.lanczos.weight_beta = inverse_temperature(cfg.temp_k, c);

    const EigenBasis basis = solve_partitioned_2d(g, cfg.grid(), e_max, c, sopt);
    const ScalarField field = density_map(basis, cfg.temp_k, c);

    write_file(out / "density.csv", scalar_field_csv(field, file_prelude(cfg, "density")));
    json jd = scalar_field_json(field);
    jd["config_hash"] = fnv1a_hex(canonical_config(cfg));
    jd["constants"] = constants_json(c);
    write_file(out / "density.json", jd.dump() + "\n");

    json report = base_report(cfg, "density");
    report["results"]["levels_retained"] = basis.energies.size();
    report["results"]["snapped_d_nm"] = basis.hy * std::lround(g.d / basis.hy) * 1e9;
    report["results"]["snapped_l_nm"] = basis.hx * std::lround(g.l / basis.hx) * 1e9;
    report["results"]["integral"] = field.integral();
    finish_report(report, out, "density", watch.ms());

    std::cout << "density map: " << basis.energies.size() << " levels, integral = "
              << format_sig(field.integral(), 9) << ", wrote " << (out / "density.csv").string()
              << "\n";
    return kExitOk;
}

int cmd_qbl(const RunConfig& cfg) {
    Stopwatch watch;
    const PhysicalConstants c;
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);

    const auto source = analytic_1d_source(c, cfg.cutoff_c);
    std::ostringstream table;
    table << "QBL closed forms vs exact spectral sums\n";
    table << "   L_nm     T_K   delta_nm      errW       errdU       errQ   note\n";
    json rows = json::array();
    char buf[160];
    for (double tk : cfg.qbl_t_k) {
        for (double lnm : cfg.qbl_l_nm) {
            const double length = lnm * 1e-9;
            try {
                const QblReport r = validate_against_exact(length, tk, source, c);
                std::snprintf(buf, sizeof(buf), "%7.4g %7.4g %10.6f %10.3e %10.3e %10.3e   %s\n",
                              lnm, tk, r.delta * 1e9, r.w_rel_err, r.du_rel_err, r.q_rel_err,
                              r.near_validity_boundary ? "near validity boundary" : "");
                table << buf;
                json jr = qbl_report_json(r);
                jr["valid"] = true;
                rows.push_back(jr);
            } catch (const DomainError& e) {
                std::snprintf(buf, sizeof(buf),
                              "%7.4g %7.4g %10.6f %10s %10s %10s   out of validity\n", lnm, tk,
                              qbl_delta(tk, c) * 1e9, "-", "-", "-");
                table << buf;
                rows.push_back({{"L", {{"value", length}, {"unit", "m"}}},
                                {"temperature", {{"value", tk}, {"unit", "K"}}},
                                {"valid", false},
                                {"reason", e.what()}});
            }
        }
    }
    std::string text = table.str();
    for (const auto& line : file_prelude(cfg, "qbl")) text = "# " + line + "\n" + text;
    write_file(out / "qbl.txt", text);
    json jq = {{"rows", rows},
               {"config_hash", fnv1a_hex(canonical_config(cfg))},
               {"constants", constants_json(c)}};
    write_file(out / "qbl.json", jq.dump(2) + "\n");

    json report = base_report(cfg, "qbl");
    report["results"]["rows"] = rows;
    finish_report(report, out, "qbl", watch.ms());

    std::cout << text;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermodynamics of a single-particle Szilard engine under confinement"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags remain valid after the subcommand name

    std::string config_path;
    RunConfig cfg;
    // Flag values land in a scratch copy first so that config-file values can
    // be applied in between: defaults < config file < explicit flags.
    std::optional<double> f_lx, f_ly, f_temp, f_grid, f_dnm, f_lnm;
    std::optional<int> f_points, f_workers;
    std::optional<std::string> f_units, f_out;

    app.add_option("--config", config_path, "flat JSON config file");
    app.add_option("--lx-nm", f_lx, "box length along the expansion axis, nm");
    app.add_option("--ly-nm", f_ly, "box height, nm");
    app.add_option("--temp-k", f_temp, "bath temperature, K");
    app.add_option("--grid-nm", f_grid, "finite-difference grid spacing, nm");
    app.add_option("--points", f_points, "sweep sample count");
    app.add_option("--workers", f_workers, "sweep worker threads (0 = all processors)");
    app.add_option("--units", f_units, "report energy unit: kt|joule|zj");
    app.add_option("--out", f_out, "output directory");

    auto* sc_cycle = app.add_subcommand("cycle", "four-step exchange ledger");
    auto* sc_sweep = app.add_subcommand("sweep", "partition sweeps (figure data)");
    sc_sweep->require_subcommand(1);
    sc_sweep->fallthrough();
    auto* sw_ins = sc_sweep->add_subcommand("insert", "penetration-depth sweep");
    auto* sw_sup = sc_sweep->add_subcommand("expand-superposed", "expansion without localization");
    auto* sw_loc = sc_sweep->add_subcommand("expand-localized", "expansion after localization");
    auto* sc_dens = app.add_subcommand("density", "thermal probability density map");
    sc_dens->add_option("--d-nm", f_dnm, "partition penetration depth, nm");
    sc_dens->add_option("--l-nm", f_lnm, "partition lateral position, nm");
    auto* sc_qbl = app.add_subcommand("qbl", "boundary-layer formulas vs exact sums");

    try {
        app.parse(argc, argv);

        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw UsageError("cannot open config file: " + config_path);
            json j;
            try {
                is >> j;
            } catch (const json::exception& e) {
                throw UsageError(std::string("config file is not valid JSON: ") + e.what());
            }
            cfg.load(j);
        }
        if (f_lx) cfg.lx_nm = *f_lx;
        if (f_ly) cfg.ly_nm = *f_ly;
        if (f_temp) cfg.temp_k = *f_temp;
        if (f_grid) cfg.grid_nm = *f_grid;
        if (f_points) cfg.points = *f_points;
        if (f_workers) cfg.workers = *f_workers;
        if (f_units) cfg.units = *f_units;
        if (f_out) cfg.out_dir = *f_out;
        if (f_dnm) cfg.d_nm = *f_dnm;
        if (f_lnm) cfg.l_nm = *f_lnm;
        cfg.validate();

        if (sc_cycle->parsed()) return cmd_cycle(cfg);
        if (sc_sweep->parsed()) {
            if (sw_ins->parsed()) return cmd_sweep(cfg, "insert");
            if (sw_sup->parsed()) return cmd_sweep(cfg, "expand-superposed");
            if (sw_loc->parsed()) return cmd_sweep(cfg, "expand-localized");
        }
        if (sc_dens->parsed()) return cmd_density(cfg);
        if (sc_qbl->parsed()) return cmd_qbl(cfg);
        throw UsageError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
}
