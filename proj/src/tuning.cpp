#include "freqstore/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "freqstore/errors.hpp"

namespace freqstore {

double steady_state_deviation(double delta_p, double alpha_l, double alpha_g, double alpha_b) {
    const double total = alpha_l + alpha_g + alpha_b;
    if (!(total > 0)) {
        throw InvalidParameter("aggregate inverse droop must be > 0");
    }
    return -delta_p / total;
}

NadirCondition vi_nadir_condition(const GridParams& params, double alpha_b, double m_v) {
    const double m = 2.0 * params.inertia_h + m_v;
    const double inv_tau = 1.0 / params.turbine_tau;
    const double margin =
        m * (inv_tau - 2.0 * std::sqrt(inv_tau * params.gen_inv_droop_alpha_g / m)) -
        params.load_damping_alpha_l - alpha_b;
    return NadirCondition{.holds = margin >= 0.0, .margin = margin};
}

double vi_beta(const GridParams& params, double alpha_b) {
    const double ag = params.gen_inv_droop_alpha_g;
    return std::sqrt(ag) + std::sqrt(params.load_damping_alpha_l + ag + alpha_b);
}

double mv_min_exact(const GridParams& params, double alpha_b) {
    const double beta = vi_beta(params, alpha_b);
    return params.turbine_tau * beta * beta - 2.0 * params.inertia_h;
}

double mv_min_linear(const GridParams& params, double alpha_b) {
    const double tau = params.turbine_tau;
    return 2.0 * tau * alpha_b + 4.0 * tau * params.gen_inv_droop_alpha_g - 2.0 * params.inertia_h;
}

ViDesign vi_design(const GridParams& params, double alpha_b) {
    return ViDesign{.alpha_b = alpha_b,
                    .m_v_min_exact = mv_min_exact(params, alpha_b),
                    .m_v_min_linear = mv_min_linear(params, alpha_b),
                    .beta = vi_beta(params, alpha_b)};
}

double design_droop_from_target(double delta_p, double delta_omega_target, double alpha_g) {
    if (delta_omega_target == 0.0 || !std::isfinite(delta_omega_target)) {
        throw InvalidParameter("target frequency deviation must be non-zero");
    }
    return std::max(0.0, std::abs(delta_p / delta_omega_target) - alpha_g);
}

double mv_min_from_target(double delta_p, double delta_omega_target, const GridParams& params,
                          MvMinVariant variant) {
    const double alpha_b =
        design_droop_from_target(delta_p, delta_omega_target, params.gen_inv_droop_alpha_g);
    if (variant == MvMinVariant::Exact) {
        return mv_min_exact(params, alpha_b);
    }
    if (alpha_b > 0.0) {
        const double tau = params.turbine_tau;
        return 2.0 * tau * std::abs(delta_p / delta_omega_target) +
               2.0 * tau * params.gen_inv_droop_alpha_g - 2.0 * params.inertia_h;
    }
    return mv_min_linear(params, 0.0);
}

double energy_capacity_estimate(double alpha_b, double k_i) {
    if (!(k_i > 0)) {
        throw UndefinedEstimate("energy capacity is unbounded without secondary control (K_I = 0)");
    }
    return alpha_b / k_i;
}

}  // namespace freqstore
