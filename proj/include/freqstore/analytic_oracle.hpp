#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freqstore/controllers.hpp"
#include "freqstore/grid_model.hpp"

// Closed-form linear analysis of the aggregated grid with K_I = 0 and no
// dead-band. Serves as the independent check on the numerical integrator.

namespace freqstore {

/// Real polynomial, coefficients in ascending powers: c[0] + c[1] s + c[2] s^2 + ...
using Polynomial = std::vector<double>;

std::complex<double> poly_eval(std::span<const double> coeffs, std::complex<double> s);
int poly_degree(std::span<const double> coeffs);

/// All complex roots, polished by Newton iteration.
std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs);

/// |p(root)| / sum_i |c_i| |root|^i
double root_residual(std::span<const double> coeffs, std::complex<double> root);

struct ClosedLoopLti {
    /// omega(s) / p_L(s), normalized so that num(0) == -1.
    Polynomial num;
    Polynomial den;
    std::vector<std::complex<double>> poles;
    std::string label;
    bool stable = true;
};

/// Interconnects the swing equation, first-order turbine and storage law.
/// Common numerator/denominator factors (iDroop lag cancelling the turbine) are
/// removed. Throws InvalidParameter when a dead-band is configured.
ClosedLoopLti closed_loop_tf(const GridParams& params, const ControllerConfig& cfg);

/// omega(t) after a step of magnitude delta_p at t = 0, in closed form.
/// Throws UnsupportedOrder for denominators above second order.
double step_response(const ClosedLoopLti& lti, double delta_p, double t);

/// d omega / dt for the same step.
double step_response_rate(const ClosedLoopLti& lti, double delta_p, double t);

/// Final value of the step response, delta_p * G(0).
double final_value(const ClosedLoopLti& lti, double delta_p);

struct NadirPoint {
    double nadir = 0.0;
    double time = 0.0;
};

/// Relative pole split |d^2|/m^2 below which a second-order loop counts as
/// critically damped. Any oscillation hidden below it decays by more than
/// e^-1e4 per half period, so the response is monotone to double precision.
inline constexpr double kStationaryTolerance = 1e-9;

/// First interior extremum of the step response, solved analytically, or
/// std::nullopt when the response is monotone. An extremum counts only when it
/// lies strictly beyond the final value. Requires a stable lti.
std::optional<NadirPoint> nadir_of_response(const ClosedLoopLti& lti, double delta_p);

}  // namespace freqstore
