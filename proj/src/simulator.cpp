#include "freqstore/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "freqstore/errors.hpp"
#include "freqstore/format.hpp"

namespace freqstore {

double deadband_response(double omega, double omega_db, double alpha_g) {
    if (omega <= -omega_db) {
        return -alpha_g * (omega + omega_db);
    }
    if (omega >= omega_db) {
        return -alpha_g * (omega - omega_db);
    }
    return 0.0;
}

std::size_t step_count(const SimOptions& options) {
    return static_cast<std::size_t>(std::floor(options.horizon / options.dt + 1e-9));
}

namespace {

// theta, omega, p_m, e_b, x_c
using StateVec = std::array<double, 5>;

SystemState to_state(const StateVec& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

struct Evaluation {
    StateVec dx{};
    double omega_dot = 0.0;
    double p_b = 0.0;
};

class ClosedLoop {
public:
    explicit ClosedLoop(const Scenario& s)
        : grid_(s.grid),
          controller_(s.controller),
          k_i_(effective_k_i(s.grid, s.sim)),
          step_(s.disturbance.step_magnitude),
          step_time_(s.disturbance.step_time),
          step_slack_(1e-9 * s.sim.dt),
          virtual_inertia_(storage_inertia(s.controller)),
          augmented_(std::holds_alternative<VirtualInertia>(s.controller)) {}

    double load(double t) const { return t >= step_time_ - step_slack_ ? step_ : 0.0; }

    // p_l is held for a whole RK4 step so a step on the sample grid never leaks
    // into the preceding interval through the k4 stage.
    Evaluation operator()(double p_l, const StateVec& x) const {
        const SystemState st = to_state(x);
        const double omega = st.omega;
        Evaluation ev;

        if (augmented_) {
            // derivative term folded into the swing equation:
            // (2H + m_v) omega_dot = p_m - p_L - alpha_L omega - alpha_b omega
            const double m = 2.0 * grid_.inertia_h + virtual_inertia_;
            const double droop_part = -storage_droop(controller_) * omega;
            ev.omega_dot = (st.p_m - p_l - grid_.load_damping_alpha_l * omega + droop_part) / m;
            ev.p_b = controller_dynamics(controller_, st, omega, ev.omega_dot).p_b;
            ev.dx[4] = 0.0;
        } else {
            const ControllerOutput out = controller_dynamics(controller_, st, omega, 0.0);
            ev.p_b = out.p_b;
            ev.omega_dot = (st.p_m - p_l - grid_.load_damping_alpha_l * omega + out.p_b) /
                           (2.0 * grid_.inertia_h);
            ev.dx[4] = out.x_c_dot;
        }

        const double governor =
            deadband_response(omega, grid_.deadband_omega_db, grid_.gen_inv_droop_alpha_g);
        ev.dx[0] = omega;
        ev.dx[1] = ev.omega_dot;
        ev.dx[2] = (-st.p_m + governor - k_i_ * st.theta) / grid_.turbine_tau;
        ev.dx[3] = ev.p_b;
        return ev;
    }

private:
    GridParams grid_;
    ControllerConfig controller_;
    double k_i_;
    double step_;
    double step_time_;
    double step_slack_;
    double virtual_inertia_;
    bool augmented_;
};

StateVec axpy(const StateVec& x, double a, const StateVec& d) {
    StateVec r;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = x[i] + a * d[i];
    }
    return r;
}

bool all_finite(const StateVec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// Streaming metric extraction shared by extract_metrics and simulate_metrics.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(const Scenario& s)
        : delta_p_(s.disturbance.step_magnitude),
          step_time_(s.disturbance.step_time),
          step_slack_(1e-9 * s.sim.dt),
          band_(s.sim.settling_band),
          sign_(delta_p_ >= 0.0 ? 1.0 : -1.0) {}

    void add(const Sample& smp) {
        const double omega = smp.state.omega;
        if (times_.empty() || omega * sign_ < nadir_ * sign_) {
            nadir_ = omega;
            nadir_time_ = smp.t;
        }
        // rise back from the running extreme, so slow recoveries count too
        max_reversal_ = std::max(max_reversal_, (omega - nadir_) * sign_);
        if (!have_rocof_ && smp.t >= step_time_ - step_slack_) {
            rocof_initial_ = smp.omega_dot;
            have_rocof_ = true;
        }
        rocof_max_abs_ = std::max(rocof_max_abs_, std::abs(smp.omega_dot));
        p_b_max_ = std::max(p_b_max_, smp.p_b * sign_);
        p_b_max_abs_ = std::max(p_b_max_abs_, std::abs(smp.p_b));
        e_b_max_ = std::max(e_b_max_, smp.state.e_b * sign_);
        omegas_.push_back(omega);
        times_.push_back(smp.t);
    }

    Metrics finish() const {
        if (omegas_.empty()) {
            throw InvalidParameter("cannot extract metrics from an empty trajectory");
        }
        Metrics m;
        m.nadir_deviation = nadir_;
        m.nadir_time = nadir_time_;
        m.rocof_initial = rocof_initial_;
        m.rocof_max_abs = rocof_max_abs_;
        m.steady_state_deviation = omegas_.back();
        m.max_reversal = std::max(0.0, max_reversal_);
        m.monotone = m.max_reversal <= kMonotoneTolerance;

        const double final_value = omegas_.back();
        const double tol = band_ * std::abs(final_value);
        std::size_t settled = 0;
        for (std::size_t i = omegas_.size(); i-- > 0;) {
            if (std::abs(omegas_[i] - final_value) > tol) {
                settled = i + 1;
                break;
            }
        }
        m.settling_time = times_[std::min(settled, times_.size() - 1)];

        if (delta_p_ == 0.0) {
            m.capacities_defined = false;
        } else {
            const double scale = std::abs(delta_p_);
            m.p_b_max_norm = p_b_max_ / scale;
            m.p_b_max_abs_norm = p_b_max_abs_ / scale;
            m.e_b_max_norm = e_b_max_ / scale;
        }
        return m;
    }

private:
    double delta_p_;
    double step_time_;
    double step_slack_;
    double band_;
    double sign_;  // +1 when the disturbance drives omega negative

    double nadir_ = 0.0;
    double nadir_time_ = 0.0;
    double rocof_initial_ = 0.0;
    bool have_rocof_ = false;
    double rocof_max_abs_ = 0.0;
    double max_reversal_ = 0.0;
    // the pre-disturbance output (zero) takes part in the maxima
    double p_b_max_ = 0.0;
    double p_b_max_abs_ = 0.0;
    double e_b_max_ = 0.0;
    std::vector<double> omegas_;
    std::vector<double> times_;
};

}  // namespace

std::size_t integrate(const Scenario& scenario, const std::function<void(const Sample&)>& sink) {
    validate(scenario);
    const ClosedLoop f(scenario);
    const double dt = scenario.sim.dt;
    const std::size_t steps = step_count(scenario.sim);

    StateVec x{};
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double p_l = f.load(t);
        const Evaluation k1 = f(p_l, x);
        sink(Sample{t, to_state(x), k1.p_b, k1.omega_dot});
        if (k == steps) {
            return steps + 1;
        }
        const Evaluation k2 = f(p_l, axpy(x, 0.5 * dt, k1.dx));
        const Evaluation k3 = f(p_l, axpy(x, 0.5 * dt, k2.dx));
        const Evaluation k4 = f(p_l, axpy(x, dt, k3.dx));
        StateVec next;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = x[i] + dt / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
        }
        if (!all_finite(next)) {
            throw IntegrationFailure("non-finite state after t = " + format_double(t), t);
        }
        x = next;
    }
}

Trajectory simulate(const Scenario& scenario) {
    Trajectory traj;
    traj.dt = scenario.sim.dt;
    traj.scenario = scenario;
    traj.samples.reserve(step_count(scenario.sim) + 1);
    integrate(scenario, [&](const Sample& s) { traj.samples.push_back(s); });
    return traj;
}

Metrics extract_metrics(const Trajectory& trajectory) {
    MetricsAccumulator acc(trajectory.scenario);
    for (const Sample& s : trajectory.samples) {
        acc.add(s);
    }
    return acc.finish();
}

Metrics simulate_metrics(const Scenario& scenario) {
    MetricsAccumulator acc(scenario);
    integrate(scenario, [&](const Sample& s) { acc.add(s); });
    return acc.finish();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const GridParams& grid = trajectory.scenario.grid;
    out << "t,omega_pu,omega_hz,p_m_pu,p_b_pu,e_b_pu_s,theta_pu_s\n";
    for (const Sample& s : trajectory.samples) {
        out << format_csv(s.t) << ',' << format_csv(s.state.omega) << ','
            << format_csv(hz_from_pu(s.state.omega, grid)) << ',' << format_csv(s.state.p_m) << ','
            << format_csv(s.p_b) << ',' << format_csv(s.state.e_b) << ','
            << format_csv(s.state.theta) << '\n';
    }
}

}  // namespace freqstore
