#include "freqstore/controllers.hpp"

#include <cmath>

#include "freqstore/errors.hpp"

namespace freqstore {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* message) {
    if (!ok) {
        throw InvalidParameter(message);
    }
}

}  // namespace

void validate(const ControllerConfig& cfg) {
    std::visit(overloaded{
                   [](const NoStorage&) {},
                   [](const Droop& c) {
                       require(std::isfinite(c.alpha_b) && c.alpha_b >= 0, "alpha_b must be >= 0");
                   },
                   [](const VirtualInertia& c) {
                       require(std::isfinite(c.alpha_b) && c.alpha_b >= 0, "alpha_b must be >= 0");
                       require(std::isfinite(c.m_v) && c.m_v >= 0, "m_v must be >= 0");
                   },
                   [](const IDroop& c) {
                       require(std::isfinite(c.alpha_b) && c.alpha_b >= 0, "alpha_b must be >= 0");
                       require(std::isfinite(c.nu) && c.nu > 0, "nu must be > 0");
                       require(std::isfinite(c.tau_i) && c.tau_i > 0, "tau_i must be > 0");
                   },
               },
               cfg);
}

std::string_view controller_kind(const ControllerConfig& cfg) {
    return std::visit(overloaded{
                          [](const NoStorage&) { return std::string_view("none"); },
                          [](const Droop&) { return std::string_view("droop"); },
                          [](const VirtualInertia&) { return std::string_view("virtual_inertia"); },
                          [](const IDroop&) { return std::string_view("idroop"); },
                      },
                      cfg);
}

double storage_droop(const ControllerConfig& cfg) {
    return std::visit(overloaded{
                          [](const NoStorage&) { return 0.0; },
                          [](const auto& c) { return c.alpha_b; },
                      },
                      cfg);
}

double storage_inertia(const ControllerConfig& cfg) {
    if (const auto* vi = std::get_if<VirtualInertia>(&cfg)) {
        return vi->m_v;
    }
    return 0.0;
}

std::complex<double> eval_tf(const ControllerConfig& cfg, std::complex<double> s) {
    using C = std::complex<double>;
    return std::visit(overloaded{
                          [](const NoStorage&) { return C(0.0); },
                          [](const Droop& c) { return C(-c.alpha_b); },
                          [&](const VirtualInertia& c) { return -(c.m_v * s + c.alpha_b); },
                          [&](const IDroop& c) {
                              const C lag_den = c.tau_i * s + 1.0;
                              if (std::abs(lag_den) == 0.0) {
                                  throw PoleEvaluation("iDroop evaluated at its pole s = -1/tau_i");
                              }
                              return (c.nu - c.alpha_b) / lag_den - c.nu;
                          },
                      },
                      cfg);
}

IDroop nadir_tuned_idroop(const GridParams& params, double alpha_b) {
    require(alpha_b >= 0, "alpha_b must be >= 0");
    return IDroop{.nu = alpha_b + params.gen_inv_droop_alpha_g,
                  .tau_i = params.turbine_tau,
                  .alpha_b = alpha_b};
}

ControllerOutput controller_dynamics(const ControllerConfig& cfg, const SystemState& state,
                                     double omega, double omega_dot) {
    return std::visit(
        overloaded{
            [](const NoStorage&) { return ControllerOutput{}; },
            [&](const Droop& c) { return ControllerOutput{0.0, -c.alpha_b * omega}; },
            [&](const VirtualInertia& c) {
                return ControllerOutput{0.0, -c.m_v * omega_dot - c.alpha_b * omega};
            },
            [&](const IDroop& c) {
                // lag state x_c tracks (nu - alpha_b) omega; output adds the -nu omega feedthrough
                return ControllerOutput{(-state.x_c + (c.nu - c.alpha_b) * omega) / c.tau_i,
                                        state.x_c - c.nu * omega};
            },
        },
        cfg);
}

}  // namespace freqstore
