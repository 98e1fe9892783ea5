#pragma once

#include <complex>
#include <string_view>
#include <variant>

#include "freqstore/grid_model.hpp"

namespace freqstore {

// Storage control laws p_b(s) = c(s) * omega(s).

struct NoStorage {
    bool operator==(const NoStorage&) const = default;
};

/// c(s) = -alpha_b
struct Droop {
    double alpha_b = 0.0;
    bool operator==(const Droop&) const = default;
};

/// c(s) = -(m_v s + alpha_b)
struct VirtualInertia {
    double m_v = 0.0;
    double alpha_b = 0.0;
    bool operator==(const VirtualInertia&) const = default;
};

/// Dynamic droop: c(s) = (nu - alpha_b) / (tau_i s + 1) - nu.
/// A lag element in parallel with a proportional gain; the DC gain is -alpha_b.
struct IDroop {
    double nu = 0.0;
    double tau_i = 1.0;
    double alpha_b = 0.0;
    bool operator==(const IDroop&) const = default;
};

using ControllerConfig = std::variant<NoStorage, Droop, VirtualInertia, IDroop>;

void validate(const ControllerConfig& cfg);

/// Lower-case identifier used in files and reports: none, droop, virtual_inertia, idroop.
std::string_view controller_kind(const ControllerConfig& cfg);

/// Steady-state inverse droop of the law (the negated DC gain).
double storage_droop(const ControllerConfig& cfg);

/// Virtual inertia constant m_v; zero for laws without a derivative term.
double storage_inertia(const ControllerConfig& cfg);

/// Evaluates c(s). Throws PoleEvaluation at s = -1/tau_i for iDroop.
std::complex<double> eval_tf(const ControllerConfig& cfg, std::complex<double> s);

/// Tuning that cancels a first-order turbine lag: nu = alpha_b + alpha_g, tau_i = tau_T.
/// The closed loop becomes first order and the frequency Nadir disappears.
IDroop nadir_tuned_idroop(const GridParams& params, double alpha_b);

struct ControllerOutput {
    double x_c_dot = 0.0;
    double p_b = 0.0;
};

/// State-space realization of the law. omega_dot is only read by VirtualInertia,
/// where the simulator supplies the exact algebraic derivative.
ControllerOutput controller_dynamics(const ControllerConfig& cfg, const SystemState& state,
                                     double omega, double omega_dot);

}  // namespace freqstore
