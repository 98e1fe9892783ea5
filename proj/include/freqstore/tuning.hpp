#pragma once

#include "freqstore/grid_model.hpp"

// Algebraic design rules for storage-based frequency control. All functions are
// pure; per-unit inputs are on the system base.

namespace freqstore {

/// Tolerance for "condition holds with equality" checks, pu.
inline constexpr double kEqualityTolerance = 1e-9;

/// omega(inf) = -delta_p / (alpha_l + alpha_g + alpha_b).
/// Throws InvalidParameter when the aggregate droop is not positive.
double steady_state_deviation(double delta_p, double alpha_l, double alpha_g, double alpha_b);

struct NadirCondition {
    bool holds = false;
    /// (2H+m_v)(1/tau_T - 2 sqrt(alpha_g / (tau_T (2H+m_v)))) - alpha_L - alpha_b.
    /// Non-negative iff the virtual-inertia closed loop has no Nadir.
    double margin = 0.0;
};

NadirCondition vi_nadir_condition(const GridParams& params, double alpha_b, double m_v);

/// sqrt(alpha_g) + sqrt(alpha_L + alpha_g + alpha_b)
double vi_beta(const GridParams& params, double alpha_b);

/// Smallest m_v that removes the Nadir, tau_T beta^2 - 2H. Negative values are
/// returned unclamped: the grid already has enough inertia.
double mv_min_exact(const GridParams& params, double alpha_b);

/// Linearization valid for alpha_b, alpha_L << alpha_g: 2 tau_T alpha_b + 4 tau_T alpha_g - 2H.
double mv_min_linear(const GridParams& params, double alpha_b);

struct ViDesign {
    double alpha_b = 0.0;
    double m_v_min_exact = 0.0;
    double m_v_min_linear = 0.0;
    double beta = 0.0;
};

ViDesign vi_design(const GridParams& params, double alpha_b);

/// Storage droop meeting a steady-state deviation target, clamped at zero.
/// Throws InvalidParameter for a zero target.
double design_droop_from_target(double delta_p, double delta_omega_target, double alpha_g);

enum class MvMinVariant { Linear, Exact };

/// Minimum virtual inertia for a deviation target. Uses the linear rule
/// 2 tau_T |dP/dw| + 2 tau_T alpha_g - 2H unless the droop clamps at zero, in
/// which case the alpha_b = 0 value is returned. `variant` selects the exact
/// expression evaluated at the designed droop instead.
double mv_min_from_target(double delta_p, double delta_omega_target, const GridParams& params,
                          MvMinVariant variant = MvMinVariant::Linear);

/// E_b,max / dP = alpha_b / K_I, seconds. Throws UndefinedEstimate for k_i <= 0.
double energy_capacity_estimate(double alpha_b, double k_i);

}  // namespace freqstore
