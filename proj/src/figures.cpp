#include "freqstore/figures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqstore/errors.hpp"
#include "freqstore/format.hpp"
#include "freqstore/simulator.hpp"
#include "freqstore/sweeps.hpp"
#include "freqstore/tuning.hpp"

namespace freqstore {
namespace {

constexpr double kFig5Horizon = 120.0;

double table1_step(const GridParams& g) { return pu_disturbance(kTable1MaxImbalanceGw, g); }

Scenario transient(const GridParams& grid, const ControllerConfig& cfg) {
    Scenario s;
    s.grid = grid;
    s.controller = cfg;
    s.disturbance.step_magnitude = table1_step(grid);
    s.sim.freeze_secondary = true;
    return s;
}

FigureFile trajectory_file(std::string name, const Scenario& s) {
    std::ostringstream out;
    write_trajectory_csv(out, simulate(s));
    return {std::move(name), out.str()};
}

// Trajectories are independent; run them concurrently and keep the order.
std::vector<FigureFile> trajectory_files(const std::vector<std::pair<std::string, Scenario>>& runs,
                                         unsigned threads) {
    std::vector<FigureFile> files(runs.size());
    parallel_for(runs.size(), threads,
                 [&](std::size_t i) { files[i] = trajectory_file(runs[i].first, runs[i].second); });
    return files;
}

std::string label(double v) {
    std::string s = format_csv(std::round(v * 100.0) / 100.0);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

std::vector<FigureFile> fig2(unsigned threads) {
    GridParams high = table1_params();
    high.inertia_h = kHighInertiaH;
    return trajectory_files({{"fig2_h4p06.csv", transient(high, NoStorage{})},
                             {"fig2_h2p19.csv", transient(table1_params(), NoStorage{})}},
                            threads);
}

std::vector<FigureFile> fig3() {
    const GridParams g = table1_params();
    std::ostringstream out;
    out << "alpha_b_pu,m_v_min_exact_pu_s,m_v_min_linear_pu_s\n";
    for (double ab : linear_grid(0.0, 15.0, 0.25)) {
        out << format_csv(ab) << ',' << format_csv(mv_min_exact(g, ab)) << ','
            << format_csv(mv_min_linear(g, ab)) << '\n';
    }
    return {{"fig3.csv", out.str()}};
}

std::vector<FigureFile> fig4(unsigned threads) {
    const GridParams g = table1_params();
    const double mv_min = mv_min_exact(g, 0.0);
    std::vector<std::pair<std::string, Scenario>> runs;
    for (double mv : {0.0, 25.0, 50.0, mv_min, 100.0, 150.0}) {
        runs.emplace_back("fig4_mv" + label(mv) + ".csv", transient(g, VirtualInertia{mv, 0.0}));
    }
    return trajectory_files(runs, threads);
}

std::vector<FigureFile> fig5(unsigned threads) {
    std::vector<FigureFile> files;
    for (double ab : {0.0, 5.0, 10.0}) {
        SweepSpec spec;
        spec.name = "fig5_ab" + label(ab);
        spec.base_scenario = transient(table1_params(), VirtualInertia{0.0, ab});
        // large m_v slows the dominant pole; 30 s would clip the maximum deviation
        spec.base_scenario.sim.horizon = kFig5Horizon;
        spec.swept_parameter = SweptParameter::ControllerMv;
        spec.values = linear_grid(0.0, 150.0, 1.0);
        std::ostringstream out;
        write_sweep_csv(out, spec, sweep(spec, threads));
        files.push_back({spec.name + ".csv", out.str()});
    }
    return files;
}

std::vector<FigureFile> fig7(unsigned threads) {
    const GridParams g = table1_params();
    return trajectory_files(
        {{"fig7_nostorage.csv", transient(g, NoStorage{})},
         {"fig7_vi.csv", transient(g, VirtualInertia{mv_min_exact(g, 0.0), 0.0})},
         {"fig7_idroop.csv", transient(g, nadir_tuned_idroop(g, 0.0))}},
        threads);
}

std::vector<FigureFile> fig8(unsigned threads) {
    const GridParams g = table1_params();
    std::vector<double> grid;
    for (double hz : linear_grid(0.10, 0.30, 0.01)) {
        grid.push_back(pu_from_hz(hz, g));
    }
    CapacityOptions opts;
    opts.delta_p = table1_step(g);
    opts.threads = threads;
    std::vector<FigureFile> files;
    for (auto strategy :
         {CapacityStrategy::Droop, CapacityStrategy::ViMin, CapacityStrategy::IDroopTuned}) {
        std::ostringstream out;
        write_capacity_csv(out, g, capacity_curve(g, strategy, grid, opts));
        files.push_back({"fig8_" + std::string(strategy_name(strategy)) + ".csv", out.str()});
    }
    return files;
}

std::vector<FigureFile> fig9(unsigned threads) {
    const GridParams g = table1_params();
    SweepSpec spec;
    spec.name = "fig9";
    spec.base_scenario = transient(g, IDroop{g.gen_inv_droop_alpha_g, 1.0, 0.0});
    spec.swept_parameter = SweptParameter::GridTurbineTau;
    spec.values = linear_grid(0.25, 3.0, 0.05);
    spec.derived_tuning = DerivedTuning::IDroopFixedLag;
    std::ostringstream out;
    write_sweep_csv(out, spec, sweep(spec, threads));
    return {{"fig9.csv", out.str()}};
}

std::vector<FigureFile> fig10(unsigned threads) {
    std::vector<std::pair<std::string, Scenario>> runs;
    for (double tau : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        GridParams g = table1_params();
        g.turbine_tau = tau;
        runs.emplace_back("fig10_taut" + label(tau) + ".csv",
                          transient(g, IDroop{g.gen_inv_droop_alpha_g, 1.0, 0.0}));
    }
    return trajectory_files(runs, threads);
}

std::vector<FigureFile> fig11(unsigned threads) {
    GridParams g = table1_params();
    g.deadband_omega_db = kTable1DeadbandPu;
    return trajectory_files({{"fig11_vi.csv", transient(g, VirtualInertia{mv_min_exact(g, 0.0), 0.0})},
                             {"fig11_idroop.csv", transient(g, nadir_tuned_idroop(g, 0.0))}},
                            threads);
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig2", "fig3", "fig4",  "fig5", "fig7",
                                              "fig8", "fig9", "fig10", "fig11"};
    return ids;
}

std::vector<FigureFile> figure_data(std::string_view id, unsigned threads) {
    if (id == "fig2") return fig2(threads);
    if (id == "fig3") return fig3();
    if (id == "fig4") return fig4(threads);
    if (id == "fig5") return fig5(threads);
    if (id == "fig7") return fig7(threads);
    if (id == "fig8") return fig8(threads);
    if (id == "fig9") return fig9(threads);
    if (id == "fig10") return fig10(threads);
    if (id == "fig11") return fig11(threads);
    throw InvalidParameter("unknown figure id '" + std::string(id) + "'");
}

}  // namespace freqstore
