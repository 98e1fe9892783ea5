#pragma once

// Aggregated single-area (center-of-inertia) grid model: physical constants,
// state vector and unit conventions.
//
// Units: every quantity inside the library is per-unit on GridParams::base_power
// (power) and on GridParams::nominal_freq (frequency deviation); time is in
// seconds. Hz and GW appear only through the conversion helpers below.

namespace freqstore {

struct GridParams {
    double base_power = 32.0;             // GW
    double nominal_freq = 60.0;           // Hz
    double inertia_h = 2.19;              // s
    double turbine_tau = 1.0;             // s
    double load_damping_alpha_l = 1.0;    // pu
    double gen_inv_droop_alpha_g = 15.0;  // pu
    double secondary_gain_k_i = 0.05;     // 1/s
    double deadband_omega_db = 0.0;       // pu, 0 disables the dead-band

    bool operator==(const GridParams&) const = default;
};

/// Step imbalance. Positive magnitude is a net load increase / loss of generation
/// and drives the frequency deviation negative.
struct Disturbance {
    double step_magnitude = 0.0;  // pu
    double step_time = 0.0;       // s

    bool operator==(const Disturbance&) const = default;
};

struct SystemState {
    double theta = 0.0;  // pu*s, integral of omega
    double omega = 0.0;  // pu
    double p_m = 0.0;    // pu, turbine power deviation
    double e_b = 0.0;    // pu*s, energy supplied by storage
    double x_c = 0.0;    // pu, storage controller internal state (iDroop lag)

    bool operator==(const SystemState&) const = default;
};

inline constexpr double kTransientHorizon = 30.0;
inline constexpr double kEnergyHorizon = 1200.0;

struct SimOptions {
    double dt = 1e-3;               // s
    double horizon = kTransientHorizon;  // s
    double settling_band = 0.05;    // fraction of the final deviation
    bool freeze_secondary = false;  // forces K_I = 0 for the run

    bool operator==(const SimOptions&) const = default;

    /// Long-horizon options used when the energy capacity under active
    /// secondary control is of interest.
    static SimOptions energy_capacity() {
        SimOptions o;
        o.horizon = kEnergyHorizon;
        return o;
    }
};

/// Great Britain 2025 low-inertia reference set.
GridParams table1_params();

/// Largest credible infeed loss of the reference system, GW.
inline constexpr double kTable1MaxImbalanceGw = 1.8;
/// Present lowest GB inertia, used as the high-inertia comparison case.
inline constexpr double kHighInertiaH = 4.06;
/// Governor dead-band of 36 mHz expressed in pu of 60 Hz.
inline constexpr double kTable1DeadbandPu = 0.0006;

/// Throws InvalidParameter when an invariant of GridParams is violated.
void validate(const GridParams& params);
void validate(const Disturbance& disturbance);
void validate(const SimOptions& options);

double pu_disturbance(double delta_p_gw, const GridParams& params);
double gw_from_pu(double p_pu, const GridParams& params);
double hz_from_pu(double omega_pu, const GridParams& params);
double pu_from_hz(double omega_hz, const GridParams& params);

/// Effective secondary gain for a run, honouring SimOptions::freeze_secondary.
inline double effective_k_i(const GridParams& params, const SimOptions& options) {
    return options.freeze_secondary ? 0.0 : params.secondary_gain_k_i;
}

}  // namespace freqstore
