#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "freqstore/errors.hpp"
#include "freqstore/figures.hpp"
#include "freqstore/scenario_file.hpp"
#include "freqstore/simulator.hpp"
#include "freqstore/sweeps.hpp"
#include "freqstore/tuning.hpp"

namespace fs = std::filesystem;

namespace freqstore::cli {
namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
    return buf;
}

// Flag overrides for grid, disturbance and sim. Frequencies in Hz, power in GW.
struct Overrides {
    std::optional<double> inertia_h;
    std::optional<double> turbine_tau;
    std::optional<double> alpha_l;
    std::optional<double> alpha_g;
    std::optional<double> k_i;
    std::optional<double> deadband_hz;
    std::optional<double> step_gw;
    std::optional<double> step_time;
    std::optional<double> dt;
    std::optional<double> horizon;
    bool freeze_secondary = false;

    void attach(CLI::App& app) {
        app.add_option("--inertia-h", inertia_h, "Inertia constant H, s");
        app.add_option("--turbine-tau", turbine_tau, "Turbine time constant, s");
        app.add_option("--alpha-l", alpha_l, "Load damping, pu");
        app.add_option("--alpha-g", alpha_g, "Generator inverse droop, pu");
        app.add_option("--k-i", k_i, "Secondary control gain, 1/s");
        app.add_option("--deadband-hz", deadband_hz, "Governor dead-band half-width, Hz");
        app.add_option("--step-gw", step_gw, "Step imbalance, GW (positive = generation loss)");
        app.add_option("--step-time", step_time, "Step time, s");
        app.add_option("--dt", dt, "Integration step, s");
        app.add_option("--horizon", horizon, "Simulated time, s");
        app.add_flag("--freeze-secondary", freeze_secondary, "Force K_I = 0 for the run");
    }

    void apply(Scenario& s) const {
        if (inertia_h) s.grid.inertia_h = *inertia_h;
        if (turbine_tau) s.grid.turbine_tau = *turbine_tau;
        if (alpha_l) s.grid.load_damping_alpha_l = *alpha_l;
        if (alpha_g) s.grid.gen_inv_droop_alpha_g = *alpha_g;
        if (k_i) s.grid.secondary_gain_k_i = *k_i;
        validate(s.grid);
        if (deadband_hz) s.grid.deadband_omega_db = pu_from_hz(*deadband_hz, s.grid);
        if (step_gw) s.disturbance.step_magnitude = pu_disturbance(*step_gw, s.grid);
        if (step_time) s.disturbance.step_time = *step_time;
        if (dt) s.sim.dt = *dt;
        if (horizon) s.sim.horizon = *horizon;
        if (freeze_secondary) s.sim.freeze_secondary = true;
    }
};

nlohmann::ordered_json metrics_json(const Scenario& s, const Metrics& m) {
    const GridParams& g = s.grid;
    nlohmann::ordered_json j;
    j["controller"] = std::string(controller_kind(s.controller));
    j["step_magnitude_pu"] = s.disturbance.step_magnitude;
    j["nadir_deviation_pu"] = m.nadir_deviation;
    j["nadir_deviation_hz"] = hz_from_pu(m.nadir_deviation, g);
    j["nadir_time_s"] = m.nadir_time;
    j["rocof_initial_pu_s"] = m.rocof_initial;
    j["rocof_initial_hz_s"] = hz_from_pu(m.rocof_initial, g);
    j["rocof_max_abs_pu_s"] = m.rocof_max_abs;
    j["steady_state_deviation_pu"] = m.steady_state_deviation;
    j["steady_state_deviation_hz"] = hz_from_pu(m.steady_state_deviation, g);
    j["settling_time_s"] = m.settling_time;
    j["p_b_max_norm"] = m.p_b_max_norm;
    j["p_b_max_abs_norm"] = m.p_b_max_abs_norm;
    j["e_b_max_norm_s"] = m.e_b_max_norm;
    j["max_reversal_pu"] = m.max_reversal;
    j["monotone"] = m.monotone;
    j["capacities_defined"] = m.capacities_defined;
    return j;
}

bool write_file(const fs::path& path, const std::string& content, std::ostream& err) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << path.string() << '\n';
        return false;
    }
    f << content;
    return static_cast<bool>(f);
}

int cmd_simulate(const std::string& scenario_path, const std::string& output_path,
                 const std::string& metrics_path, const Overrides& overrides, std::ostream& out,
                 std::ostream& err) {
    const Scenario scenario =
        load_scenario(scenario_path, [&](Scenario& s) { overrides.apply(s); });
    const Trajectory traj = simulate(scenario);
    const Metrics m = extract_metrics(traj);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    if (!write_file(output_path, csv.str(), err)) return kExitUsage;
    const std::string mpath = metrics_path.empty() ? output_path + ".metrics.json" : metrics_path;
    if (!write_file(mpath, metrics_json(scenario, m).dump(2) + "\n", err)) return kExitUsage;

    const GridParams& g = scenario.grid;
    out << "controller: " << controller_kind(scenario.controller) << '\n'
        << "samples: " << traj.samples.size() << '\n'
        << "nadir: " << num(hz_from_pu(m.nadir_deviation, g)) << " Hz at " << num(m.nadir_time)
        << " s\n"
        << "steady-state deviation: " << num(hz_from_pu(m.steady_state_deviation, g)) << " Hz\n"
        << "initial RoCoF: " << num(hz_from_pu(m.rocof_initial, g)) << " Hz/s\n"
        << "settling time: " << num(m.settling_time) << " s\n"
        << "monotone: " << (m.monotone ? "true" : "false") << '\n';
    if (m.capacities_defined) {
        out << "p_b,max/dP: " << num(m.p_b_max_norm) << '\n'
            << "E_b,max/dP: " << num(m.e_b_max_norm) << " s\n";
    } else {
        out << "capacities: undefined (zero disturbance)\n";
    }
    out << "trajectory: " << output_path << "\nmetrics: " << mpath << '\n';
    return kExitOk;
}

struct TuneArgs {
    bool table1 = false;
    double target_hz = 0.0;
    double delta_p_gw = kTable1MaxImbalanceGw;
    std::optional<double> base_gw;
    std::optional<double> inertia_h;
    std::optional<double> turbine_tau;
    std::optional<double> alpha_l;
    std::optional<double> alpha_g;
    std::optional<double> k_i;
    bool json = false;
};

int cmd_tune(const TuneArgs& a, std::ostream& out, std::ostream& err) {
    GridParams g = table1_params();
    if (a.base_gw) g.base_power = *a.base_gw;
    if (a.inertia_h) g.inertia_h = *a.inertia_h;
    if (a.turbine_tau) g.turbine_tau = *a.turbine_tau;
    if (a.alpha_l) g.load_damping_alpha_l = *a.alpha_l;
    if (a.alpha_g) g.gen_inv_droop_alpha_g = *a.alpha_g;
    if (a.k_i) g.secondary_gain_k_i = *a.k_i;
    validate(g);
    if (a.target_hz == 0.0) {
        err << "error: --target-hz must be non-zero\n";
        return kExitUsage;
    }
    const double dp = pu_disturbance(a.delta_p_gw, g);
    const double target = pu_from_hz(std::abs(a.target_hz), g);
    const double alpha_b = design_droop_from_target(dp, target, g.gen_inv_droop_alpha_g);
    const double unclamped = std::abs(dp / target) - g.gen_inv_droop_alpha_g;
    const double mv_target = mv_min_from_target(dp, target, g);
    const ViDesign vi = vi_design(g, alpha_b);
    const IDroop id = nadir_tuned_idroop(g, alpha_b);
    std::optional<double> energy;
    if (g.secondary_gain_k_i > 0.0) energy = energy_capacity_estimate(alpha_b, g.secondary_gain_k_i);
    const double ss = steady_state_deviation(dp, g.load_damping_alpha_l, g.gen_inv_droop_alpha_g, alpha_b);

    if (a.json) {
        nlohmann::ordered_json j;
        j["delta_p_pu"] = dp;
        j["target_pu"] = target;
        j["alpha_b_pu"] = alpha_b;
        j["alpha_b_clamped"] = unclamped < 0.0;
        j["m_v_min_target_pu_s"] = mv_target;
        j["m_v_min_exact_pu_s"] = vi.m_v_min_exact;
        j["m_v_min_linear_pu_s"] = vi.m_v_min_linear;
        j["m_v_min_over_h"] = vi.m_v_min_exact / g.inertia_h;
        j["m_v_min_over_2h"] = vi.m_v_min_exact / (2.0 * g.inertia_h);
        j["idroop_nu_pu"] = id.nu;
        j["idroop_tau_i_s"] = id.tau_i;
        j["energy_capacity_norm_s"] = energy ? nlohmann::ordered_json(*energy) : nlohmann::ordered_json();
        j["steady_state_deviation_hz"] = hz_from_pu(ss, g);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "disturbance: " << num(a.delta_p_gw) << " GW = " << num(dp) << " pu\n"
        << "target deviation: " << num(std::abs(a.target_hz)) << " Hz = " << num(target) << " pu\n"
        << "alpha_b: " << num(alpha_b) << " pu" << (unclamped < 0.0 ? " (clamped, generators alone meet the target)" : "")
        << '\n'
        << "m_v,min (design rule): " << num(mv_target) << " pu*s\n"
        << "m_v,min exact: " << num(vi.m_v_min_exact) << " pu*s\n"
        << "m_v,min linear: " << num(vi.m_v_min_linear) << " pu*s\n"
        << "m_v,min / H: " << num(vi.m_v_min_exact / g.inertia_h)
        << ", m_v,min / 2H: " << num(vi.m_v_min_exact / (2.0 * g.inertia_h)) << '\n'
        << "idroop: nu = " << num(id.nu) << " pu, tau_i = " << num(id.tau_i) << " s\n"
        << "E_b,max/dP: " << (energy ? num(*energy) + " s" : std::string("undefined (K_I = 0)")) << '\n'
        << "steady-state deviation: " << num(hz_from_pu(ss, g)) << " Hz\n";
    return kExitOk;
}

struct SweepArgs {
    std::string scenario;
    std::string param;
    double from = 0.0;
    double to = 0.0;
    double step = 1.0;
    std::string tuning = "none";
    std::string name;
    std::string out_dir = ".";
    unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    const auto param = parse_parameter(a.param);
    if (!param) {
        err << "error: unknown parameter '" << a.param << "'\n";
        return kExitUsage;
    }
    static const std::pair<std::string_view, DerivedTuning> tunings[] = {
        {"none", DerivedTuning::None},
        {"vi_min_exact", DerivedTuning::ViAtMvMinExact},
        {"vi_min_linear", DerivedTuning::ViAtMvMinLinear},
        {"idroop_tuned", DerivedTuning::IDroopNadirTuned},
        {"idroop_fixed_lag", DerivedTuning::IDroopFixedLag},
    };
    const auto t = std::find_if(std::begin(tunings), std::end(tunings),
                                [&](const auto& e) { return e.first == a.tuning; });
    if (t == std::end(tunings)) {
        err << "error: unknown tuning '" << a.tuning << "'\n";
        return kExitUsage;
    }
    SweepSpec spec;
    spec.name = a.name.empty() ? a.param : a.name;
    spec.base_scenario = load_scenario(a.scenario, [&](Scenario& s) { overrides.apply(s); });
    spec.swept_parameter = *param;
    spec.values = linear_grid(a.from, a.to, a.step);
    spec.derived_tuning = t->second;
    const auto rows = sweep(spec, a.threads);
    std::ostringstream csv;
    write_sweep_csv(csv, spec, rows);
    const fs::path path = fs::path(a.out_dir) / (spec.name + ".csv");
    if (!write_file(path, csv.str(), err)) return kExitUsage;
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.metrics; });
    out << "sweep " << spec.name << ": " << rows.size() << " points, " << failed << " failed\n"
        << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_figure(const std::string& id, const std::string& out_dir, unsigned threads,
               std::ostream& out, std::ostream& err) {
    std::vector<std::string> ids;
    if (id == "all") {
        ids = figure_ids();
    } else if (std::find(figure_ids().begin(), figure_ids().end(), id) != figure_ids().end()) {
        ids = {id};
    } else {
        err << "error: unknown figure id '" << id << "'\n";
        return kExitUsage;
    }
    for (const auto& fid : ids) {
        for (const FigureFile& f : figure_data(fid, threads)) {
            const fs::path path = fs::path(out_dir) / f.file_name;
            if (!write_file(path, f.csv, err)) return kExitUsage;
            out << "wrote " << path.string() << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Storage-based frequency control toolkit for low-inertia grids", "freqstore"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Simulate a scenario file and write trajectory CSV + metrics");
    std::string sim_scenario;
    std::string sim_output;
    std::string sim_metrics;
    Overrides sim_over;
    sim->add_option("scenario", sim_scenario, "Scenario file")->required();
    sim->add_option("output", sim_output, "Trajectory CSV path")->required();
    sim->add_option("--metrics", sim_metrics, "Metrics JSON path (default <output>.metrics.json)");
    sim_over.attach(*sim);

    auto* tune = app.add_subcommand("tune", "Design storage gains for a frequency-deviation target");
    TuneArgs ta;
    tune->add_flag("--table1", ta.table1, "Use the reference grid parameters (default)");
    tune->add_option("--target-hz", ta.target_hz, "Allowed steady-state deviation, Hz")->required();
    tune->add_option("--delta-p-gw", ta.delta_p_gw, "Design disturbance, GW");
    tune->add_option("--base-gw", ta.base_gw, "System power base, GW");
    tune->add_option("--inertia-h", ta.inertia_h, "Inertia constant H, s");
    tune->add_option("--turbine-tau", ta.turbine_tau, "Turbine time constant, s");
    tune->add_option("--alpha-l", ta.alpha_l, "Load damping, pu");
    tune->add_option("--alpha-g", ta.alpha_g, "Generator inverse droop, pu");
    tune->add_option("--k-i", ta.k_i, "Secondary control gain, 1/s");
    tune->add_flag("--json", ta.json, "Print the report as JSON");

    auto* sw = app.add_subcommand("sweep", "Sweep one parameter of a scenario and write <name>.csv");
    SweepArgs sa;
    Overrides sw_over;
    sw->add_option("scenario", sa.scenario, "Base scenario file")->required();
    sw->add_option("--param", sa.param,
                   "m_v, alpha_b, nu, tau_i, inertia_h, turbine_tau, deadband_omega_db, "
                   "secondary_gain_k_i, step_magnitude")
        ->required();
    sw->add_option("--from", sa.from, "First value")->required();
    sw->add_option("--to", sa.to, "Last value")->required();
    sw->add_option("--step", sa.step, "Grid step")->required();
    sw->add_option("--tuning", sa.tuning,
                   "none, vi_min_exact, vi_min_linear, idroop_tuned, idroop_fixed_lag");
    sw->add_option("--name", sa.name, "Sweep name (output file stem)");
    sw->add_option("-d,--out-dir", sa.out_dir, "Output directory");
    sw->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
    sw_over.attach(*sw);

    auto* fig = app.add_subcommand("figure", "Regenerate a reference figure dataset as CSV");
    std::string fig_id;
    std::string fig_dir = ".";
    unsigned fig_threads = 0;
    fig->add_option("id", fig_id, "fig2 fig3 fig4 fig5 fig7 fig8 fig9 fig10 fig11 or all")->required();
    fig->add_option("-d,--out-dir", fig_dir, "Output directory");
    fig->add_option("--threads", fig_threads, "Worker threads (0 = all cores)");

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_scenario, sim_output, sim_metrics, sim_over, out, err);
        if (tune->parsed()) return cmd_tune(ta, out, err);
        if (sw->parsed()) return cmd_sweep(sa, sw_over, out, err);
        if (fig->parsed()) return cmd_figure(fig_id, fig_dir, fig_threads, out, err);
    } catch (const IntegrationFailure& e) {
        err << "integration failure: " << e.what() << " (last valid t = " << e.last_valid_time() << " s)\n";
        return kExitNumerical;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace freqstore::cli
