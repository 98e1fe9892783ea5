#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freqstore/scenario.hpp"
#include "freqstore/simulator.hpp"

namespace freqstore {

enum class SweptParameter {
    ControllerMv,
    ControllerAlphaB,
    ControllerNu,
    ControllerTauI,
    GridInertia,
    GridTurbineTau,
    GridDeadband,
    GridSecondaryGain,
    DisturbanceMagnitude,
};

/// Rule re-tuning the controller after the swept value is applied.
enum class DerivedTuning {
    None,
    /// VirtualInertia with m_v = max(0, mv_min_exact(alpha_b)).
    ViAtMvMinExact,
    /// VirtualInertia with m_v = max(0, mv_min_linear(alpha_b)).
    ViAtMvMinLinear,
    /// IDroop with nu = alpha_b + alpha_g and tau_i = tau_T.
    IDroopNadirTuned,
    /// IDroop with nu = alpha_b + alpha_g, tau_i left as configured.
    IDroopFixedLag,
};

std::string_view parameter_name(SweptParameter p);
std::optional<SweptParameter> parse_parameter(std::string_view name);

struct SweepSpec {
    std::string name;
    Scenario base_scenario;
    SweptParameter swept_parameter = SweptParameter::ControllerMv;
    std::vector<double> values;
    DerivedTuning derived_tuning = DerivedTuning::None;
};

struct SweepRow {
    double value = 0.0;
    std::optional<Metrics> metrics;
    std::string error;
};

/// Scenario for one sweep point. Throws InvalidParameter when the parameter
/// does not apply to the configured controller.
Scenario instantiate(const SweepSpec& spec, double value);

/// Evenly spaced grid [first, last] with the given step (inclusive of last
/// within half a step).
std::vector<double> linear_grid(double first, double last, double step);

/// Runs every point (concurrently when threads != 1) and returns rows in input
/// order. Per-point integration failures are stored in the row.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads = 0);

/// First column the swept value, then the Metrics fields, then an error column.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, std::span<const SweepRow> rows);

enum class CapacityStrategy { Droop, ViMin, IDroopTuned };

std::string_view strategy_name(CapacityStrategy s);

struct CapacityOptions {
    double delta_p = kTable1MaxImbalanceGw / 32.0;  // pu
    double dt = 1e-3;
    double transient_horizon = kTransientHorizon;
    double energy_horizon = kEnergyHorizon;
    double energy_k_i = 0.05;
    unsigned threads = 0;
};

struct CapacityRow {
    double delta_omega = 0.0;  // pu, magnitude of the target
    double alpha_b = 0.0;
    bool feasible = true;
    double p_b_max_norm = 0.0;
    double e_b_max_norm = 0.0;
    double max_deviation = 0.0;  // pu, from the K_I = 0 run
    std::string error;
};

/// Storage sizing against a frequency-deviation target. Power capacity comes
/// from a K_I = 0 transient run, energy capacity from a long run with K_I > 0.
std::vector<CapacityRow> capacity_curve(const GridParams& params, CapacityStrategy strategy,
                                        std::span<const double> delta_omega_grid,
                                        const CapacityOptions& options = {});

void write_capacity_csv(std::ostream& out, const GridParams& params,
                        std::span<const CapacityRow> rows);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace freqstore
