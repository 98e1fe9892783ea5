#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "freqstore/scenario.hpp"

namespace freqstore {

/// Governor response with a symmetric dead-band of half-width omega_db.
/// Reduces to -alpha_g * omega when omega_db == 0.
double deadband_response(double omega, double omega_db, double alpha_g);

struct Sample {
    double t = 0.0;
    SystemState state;
    double p_b = 0.0;
    double omega_dot = 0.0;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<Sample> samples;
    Scenario scenario;
};

/// Tolerance separating a genuine frequency reversal from integrator jitter, pu.
/// Applied to the recovery from the running extreme, not to single steps.
inline constexpr double kMonotoneTolerance = 1e-6;

struct Metrics {
    /// Extreme deviation in the direction of the disturbance (min omega for dP >= 0).
    double nadir_deviation = 0.0;
    double nadir_time = 0.0;
    double rocof_initial = 0.0;
    double rocof_max_abs = 0.0;
    /// omega at the end of the horizon.
    double steady_state_deviation = 0.0;
    double settling_time = 0.0;
    /// max_t p_b / dP, counting the pre-disturbance output of zero.
    double p_b_max_norm = 0.0;
    /// max_t |p_b| / |dP|
    double p_b_max_abs_norm = 0.0;
    /// max_t E_b / dP, seconds.
    double e_b_max_norm = 0.0;
    /// Largest recovery of omega from its running extreme, against the
/// disturbance direction, pu.
    double max_reversal = 0.0;
    bool monotone = true;
    /// False when dP == 0 and the normalized capacities are reported as zero.
    bool capacities_defined = true;
};

/// Fixed-step RK4 integration of the closed loop. Throws IntegrationFailure on a
/// non-finite state.
Trajectory simulate(const Scenario& scenario);

/// Metrics of the trajectory; the settling band is taken from the scenario.
Metrics extract_metrics(const Trajectory& trajectory);

/// Same result as extract_metrics(simulate(scenario)) without keeping the
/// full trajectory in memory. Used for long horizons and sweeps.
Metrics simulate_metrics(const Scenario& scenario);

/// Drives the integrator and hands every sample to `sink`. Returns the number of samples.
std::size_t integrate(const Scenario& scenario, const std::function<void(const Sample&)>& sink);

/// Number of integration steps for the options: floor(horizon / dt).
std::size_t step_count(const SimOptions& options);

/// CSV with header t,omega_pu,omega_hz,p_m_pu,p_b_pu,e_b_pu_s,theta_pu_s.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace freqstore
