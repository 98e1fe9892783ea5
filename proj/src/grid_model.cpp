#include "freqstore/grid_model.hpp"

#include <cmath>
#include <string>

#include "freqstore/errors.hpp"
#include "freqstore/scenario.hpp"

namespace freqstore {
namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw InvalidParameter(message);
    }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

GridParams table1_params() { return GridParams{}; }

void validate(const GridParams& p) {
    require(finite(p.base_power) && p.base_power > 0, "base_power must be > 0");
    require(finite(p.nominal_freq) && p.nominal_freq > 0, "nominal_freq must be > 0");
    require(finite(p.inertia_h) && p.inertia_h > 0, "inertia_h must be > 0");
    require(finite(p.turbine_tau) && p.turbine_tau > 0, "turbine_tau must be > 0");
    require(finite(p.gen_inv_droop_alpha_g) && p.gen_inv_droop_alpha_g > 0,
            "gen_inv_droop_alpha_g must be > 0");
    require(finite(p.load_damping_alpha_l) && p.load_damping_alpha_l >= 0,
            "load_damping_alpha_l must be >= 0");
    require(finite(p.secondary_gain_k_i) && p.secondary_gain_k_i >= 0,
            "secondary_gain_k_i must be >= 0");
    require(finite(p.deadband_omega_db) && p.deadband_omega_db >= 0,
            "deadband_omega_db must be >= 0");
}

void validate(const Disturbance& d) {
    require(finite(d.step_magnitude), "step_magnitude must be finite");
    require(finite(d.step_time) && d.step_time >= 0, "step_time must be >= 0");
}

void validate(const SimOptions& o) {
    require(finite(o.dt) && o.dt > 0, "dt must be > 0");
    require(finite(o.horizon) && o.dt <= o.horizon, "horizon must be >= dt");
    require(finite(o.settling_band) && o.settling_band > 0 && o.settling_band < 1,
            "settling_band must lie in (0, 1)");
}

void validate(const Scenario& s) {
    validate(s.grid);
    validate(s.controller);
    validate(s.disturbance);
    validate(s.sim);
}

double pu_disturbance(double delta_p_gw, const GridParams& params) {
    require(params.base_power > 0, "base_power must be > 0");
    return delta_p_gw / params.base_power;
}

double gw_from_pu(double p_pu, const GridParams& params) { return p_pu * params.base_power; }

double hz_from_pu(double omega_pu, const GridParams& params) {
    return omega_pu * params.nominal_freq;
}

double pu_from_hz(double omega_hz, const GridParams& params) {
    require(params.nominal_freq > 0, "nominal_freq must be > 0");
    return omega_hz / params.nominal_freq;
}

}  // namespace freqstore
