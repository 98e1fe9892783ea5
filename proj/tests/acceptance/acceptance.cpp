// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "freqstore/analytic_oracle.hpp"
#include "freqstore/simulator.hpp"
#include "freqstore/sweeps.hpp"
#include "freqstore/tuning.hpp"

using namespace freqstore;

namespace {

constexpr double kStep = 0.05625;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, bool ok, const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += buf;
    if (!ok) {
        o.detail += " [x]";
        o.pass = false;
    }
}

double round_sig(double x, int digits) {
    if (x == 0.0) return 0.0;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    return std::round(x * scale) / scale;
}

bool same_sig(double x, double ref, int digits) {
    return std::abs(round_sig(x, digits) - round_sig(ref, digits)) <= 1e-12 * std::abs(ref);
}

Scenario table1(const ControllerConfig& cfg, bool frozen = true) {
    Scenario s;
    s.controller = cfg;
    s.disturbance.step_magnitude = kStep;
    s.sim.freeze_secondary = frozen;
    return s;
}

double monic_discriminant(const GridParams& g, double ab, double m) {
    const double a = m * g.turbine_tau;
    const double b = g.turbine_tau * (g.load_damping_alpha_l + ab) + m;
    const double c = g.load_damping_alpha_l + ab + g.gen_inv_droop_alpha_g;
    return (b / a) * (b / a) - 4.0 * c / a;
}

Outcome tuning_constants() {
    Outcome o;
    const GridParams g = table1_params();
    const double exact = mv_min_exact(g, 0.0);
    const double linear = mv_min_linear(g, 0.0);
    note(o, same_sig(exact, 57.6039, 4), "m_v,min exact = %.6f", exact);
    note(o, same_sig(linear, 55.62, 4), "m_v,min linear = %.6f", linear);
    double worst = 0.0;
    for (double ab : linear_grid(0.0, 15.0, 0.25)) {
        const double e = mv_min_exact(g, ab);
        worst = std::max(worst, std::abs(mv_min_linear(g, ab) - e) / e);
    }
    note(o, worst <= 0.05, "max relative gap over alpha_b in [0,15] = %.4f", worst);
    return o;
}

Outcome steady_state() {
    Outcome o;
    const Trajectory t = simulate(table1(NoStorage{}));
    const double w = t.samples.back().state.omega;
    const double ref = -kStep / 16.0;
    const double rel = std::abs(w - ref) / std::abs(ref);
    note(o, rel <= 1e-3, "omega(30 s) = %.7e pu (%.5f Hz), rel err %.2e", w, hz_from_pu(w, table1_params()), rel);
    return o;
}

Outcome nadir_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> h(0.5, 6.0), tau(0.2, 3.0), al(0.2, 2.0), ag(5.0, 30.0), ab(0.0, 15.0),
        unit(0.0, 1.0);
    int agree = 0;
    int boundary = 0;
    int nadir_cases = 0;
    double worst_disc = 0.0;
    for (int i = 0; i < 100; ++i) {
        GridParams g = table1_params();
        g.inertia_h = h(rng);
        g.turbine_tau = tau(rng);
        g.load_damping_alpha_l = al(rng);
        g.gen_inv_droop_alpha_g = ag(rng);
        const double b = ab(rng);
        const double mv_min = mv_min_exact(g, b);
        const double mv = unit(rng) * 2.0 * std::max(mv_min, 10.0);
        const auto cond = vi_nadir_condition(g, b, mv);
        const bool monotone = !nadir_of_response(closed_loop_tf(g, VirtualInertia{mv, b}), kStep).has_value();
        if (!monotone) ++nadir_cases;
        if (cond.holds == monotone) {
            ++agree;
        } else if (std::abs(cond.margin) <= 1e-6) {
            ++agree;
            ++boundary;
        }
        worst_disc = std::max(worst_disc, std::abs(monic_discriminant(g, b, 2.0 * g.inertia_h + mv_min)));
    }
    note(o, agree == 100, "%d/100 verdicts agree (%d within boundary slack, %d with Nadir)", agree, boundary,
         nadir_cases);
    note(o, worst_disc <= 1e-9, "max |discriminant| at m_v,min = %.2e", worst_disc);
    return o;
}

Outcome idroop_first_order() {
    Outcome o;
    const Trajectory t = simulate(table1(nadir_tuned_idroop(table1_params(), 0.0)));
    double worst = 0.0;
    for (const Sample& x : t.samples) {
        const double ref = -(kStep / 16.0) * (1.0 - std::exp(-x.t / 0.27375));
        worst = std::max(worst, std::abs(x.state.omega - ref));
    }
    note(o, worst <= 1e-4, "max abs error vs first-order law = %.2e pu", worst);
    note(o, extract_metrics(t).monotone, "monotone = %s", extract_metrics(t).monotone ? "true" : "false");
    return o;
}

Outcome power_capacity() {
    Outcome o;
    const GridParams g = table1_params();
    const Metrics id = simulate_metrics(table1(nadir_tuned_idroop(g, 0.0)));
    const Metrics vi = simulate_metrics(table1(VirtualInertia{mv_min_exact(g, 0.0), 0.0}));
    const double ratio = id.p_b_max_norm / vi.p_b_max_norm;
    note(o, ratio >= 0.5 && ratio <= 0.7, "p_b,max iDroop %.6f / VI %.6f = %.6f (golden 0.619037)", id.p_b_max_norm,
         vi.p_b_max_norm, ratio);
    return o;
}

Outcome energy_capacity() {
    Outcome o;
    const GridParams g = table1_params();
    const std::vector<double> droops{2.0, 5.0, 10.0, 15.0};
    std::vector<Scenario> runs;
    for (double ab : droops) {
        for (const ControllerConfig& cfg :
             {ControllerConfig{nadir_tuned_idroop(g, ab)}, ControllerConfig{VirtualInertia{mv_min_exact(g, ab), ab}}}) {
            Scenario s = table1(cfg, false);
            s.sim.horizon = kEnergyHorizon;
            runs.push_back(s);
        }
    }
    std::vector<double> energy(runs.size());
    parallel_for(runs.size(), 0, [&](std::size_t i) { energy[i] = simulate_metrics(runs[i]).e_b_max_norm; });
    for (std::size_t i = 0; i < droops.size(); ++i) {
        const double est = energy_capacity_estimate(droops[i], g.secondary_gain_k_i);
        const double r_id = energy[2 * i] / est;
        const double r_vi = energy[2 * i + 1] / est;
        note(o, std::abs(r_id - 1.0) <= 0.05 && std::abs(r_vi - 1.0) <= 0.05,
             "alpha_b=%g: E_b/(alpha_b/K_I) iDroop %.4f, VI %.4f", droops[i], r_id, r_vi);
    }
    return o;
}

Outcome robustness() {
    Outcome o;
    const GridParams g = table1_params();
    SweepSpec spec{"tau", table1(IDroop{g.gen_inv_droop_alpha_g, 1.0, 0.0}), SweptParameter::GridTurbineTau,
                   {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}, DerivedTuning::IDroopFixedLag};
    const auto rows = sweep(spec);
    std::vector<double> dev;
    for (const auto& r : rows) dev.push_back(r.metrics ? -r.metrics->nadir_deviation : NAN);
    double spread = 0.0;
    for (std::size_t i = 0; i < 4; ++i) spread = std::max(spread, std::abs(dev[i] - dev[0]));
    note(o, spread <= 1e-5, "spread over tau_T <= 1 s = %.2e pu", spread);
    const bool rising = dev[3] < dev[4] && dev[4] < dev[5] && dev[5] < dev[6];
    note(o, rising, "max dev at tau_T = 1, 1.5, 2, 3: %.6f %.6f %.6f %.6f", dev[3], dev[4], dev[5], dev[6]);
    return o;
}

Outcome deadband() {
    Outcome o;
    const GridParams g = table1_params();
    GridParams db = g;
    db.deadband_omega_db = kTable1DeadbandPu;
    const std::pair<const char*, ControllerConfig> cases[] = {
        {"VI", VirtualInertia{mv_min_exact(g, 0.0), 0.0}}, {"iDroop", nadir_tuned_idroop(g, 0.0)}};
    for (const auto& [name, cfg] : cases) {
        Scenario lin = table1(cfg);
        Scenario dead = lin;
        dead.grid = db;
        const Metrics a = simulate_metrics(lin);
        const Metrics b = simulate_metrics(dead);
        note(o, b.max_reversal <= 1e-5, "%s max reversal %.1e pu", name, b.max_reversal);
        const double change = std::abs(b.nadir_deviation - a.nadir_deviation) / std::abs(a.nadir_deviation);
        note(o, change < 0.05, "%s Nadir %.6e -> %.6e (%.1f%%)", name, a.nadir_deviation, b.nadir_deviation,
             100.0 * change);
    }
    return o;
}

Outcome integrator() {
    Outcome o;
    const GridParams g = table1_params();
    const double mv = mv_min_exact(g, 0.0);
    const std::pair<const char*, ControllerConfig> cases[] = {
        {"none", NoStorage{}},
        {"droop", Droop{1.875}},
        {"vi_min", VirtualInertia{mv, 0.0}},
        {"vi_25", VirtualInertia{25.0, 0.0}},
        {"vi_min_ab5", VirtualInertia{mv_min_exact(g, 5.0), 5.0}},
        {"idroop", nadir_tuned_idroop(g, 0.0)},
        {"idroop_ab5", nadir_tuned_idroop(g, 5.0)},
    };
    double worst = 0.0;
    for (const auto& [name, cfg] : cases) {
        const Scenario s = table1(cfg);
        const auto lti = closed_loop_tf(s.grid, s.controller);
        integrate(s, [&](const Sample& x) {
            worst = std::max(worst, std::abs(x.state.omega - step_response(lti, kStep, x.t)));
        });
    }
    note(o, worst <= 1e-6, "max |RK4 - closed form| over %zu scenarios = %.2e pu", std::size(cases), worst);

    Scenario s = table1(NoStorage{}, false);
    const double coarse = simulate_metrics(s).nadir_deviation;
    s.sim.dt /= 2.0;
    const double fine = simulate_metrics(s).nadir_deviation;
    note(o, std::abs(coarse - fine) <= 1e-8, "Nadir change on halving dt = %.2e pu", std::abs(coarse - fine));
    return o;
}

Outcome rocof() {
    Outcome o;
    const GridParams g = table1_params();
    const double mv = mv_min_exact(g, 0.0);
    const double id = std::abs(simulate_metrics(table1(nadir_tuned_idroop(g, 0.0))).rocof_initial);
    const double vi = std::abs(simulate_metrics(table1(VirtualInertia{mv, 0.0})).rocof_initial);
    note(o, id > vi, "iDroop %.6e > VI %.6e pu/s", id, vi);
    note(o, same_sig(id, 0.012843, 4) && same_sig(id, kStep / (2.0 * g.inertia_h), 4), "iDroop vs dP/2H = %.6e",
         kStep / (2.0 * g.inertia_h));
    note(o, same_sig(vi, 9.075e-4, 4) && same_sig(vi, kStep / (2.0 * g.inertia_h + mv), 4),
         "VI vs dP/(2H+m_v) = %.6e", kStep / (2.0 * g.inertia_h + mv));
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"tuning constants", tuning_constants},
        {"steady state", steady_state},
        {"Nadir elimination equivalence", nadir_equivalence},
        {"iDroop first-order response", idroop_first_order},
        {"power-capacity advantage", power_capacity},
        {"energy capacity", energy_capacity},
        {"robustness asymmetry", robustness},
        {"dead-band resilience", deadband},
        {"integrator validity", integrator},
        {"RoCoF ordering", rocof},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", index, name, secs, o.detail.c_str());
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
