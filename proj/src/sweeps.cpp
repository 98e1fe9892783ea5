#include "freqstore/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "freqstore/errors.hpp"
#include "freqstore/format.hpp"
#include "freqstore/tuning.hpp"

namespace freqstore {

namespace {

struct ParameterEntry {
    SweptParameter id;
    std::string_view name;
};

constexpr ParameterEntry kParameters[] = {
    {SweptParameter::ControllerMv, "m_v"},
    {SweptParameter::ControllerAlphaB, "alpha_b"},
    {SweptParameter::ControllerNu, "nu"},
    {SweptParameter::ControllerTauI, "tau_i"},
    {SweptParameter::GridInertia, "inertia_h"},
    {SweptParameter::GridTurbineTau, "turbine_tau"},
    {SweptParameter::GridDeadband, "deadband_omega_db"},
    {SweptParameter::GridSecondaryGain, "secondary_gain_k_i"},
    {SweptParameter::DisturbanceMagnitude, "step_magnitude"},
};

[[noreturn]] void not_applicable(SweptParameter p, const ControllerConfig& cfg) {
    throw InvalidParameter("parameter " + std::string(parameter_name(p)) +
                           " does not apply to controller " + std::string(controller_kind(cfg)));
}

void set_alpha_b(ControllerConfig& cfg, double v) {
    std::visit(
        [&](auto& c) {
            if constexpr (requires { c.alpha_b; }) {
                c.alpha_b = v;
            } else {
                not_applicable(SweptParameter::ControllerAlphaB, cfg);
            }
        },
        cfg);
}

void apply_tuning(Scenario& s, DerivedTuning tuning) {
    const double ab = storage_droop(s.controller);
    switch (tuning) {
        case DerivedTuning::None:
            break;
        case DerivedTuning::ViAtMvMinExact:
            s.controller = VirtualInertia{std::max(0.0, mv_min_exact(s.grid, ab)), ab};
            break;
        case DerivedTuning::ViAtMvMinLinear:
            s.controller = VirtualInertia{std::max(0.0, mv_min_linear(s.grid, ab)), ab};
            break;
        case DerivedTuning::IDroopNadirTuned:
            s.controller = nadir_tuned_idroop(s.grid, ab);
            break;
        case DerivedTuning::IDroopFixedLag: {
            double tau_i = s.grid.turbine_tau;
            if (const auto* id = std::get_if<IDroop>(&s.controller)) tau_i = id->tau_i;
            s.controller = IDroop{ab + s.grid.gen_inv_droop_alpha_g, tau_i, ab};
            break;
        }
    }
}

}  // namespace

std::string_view parameter_name(SweptParameter p) {
    for (const auto& e : kParameters) {
        if (e.id == p) return e.name;
    }
    return "unknown";
}

std::optional<SweptParameter> parse_parameter(std::string_view name) {
    for (const auto& e : kParameters) {
        if (e.name == name) return e.id;
    }
    return std::nullopt;
}

Scenario instantiate(const SweepSpec& spec, double value) {
    Scenario s = spec.base_scenario;
    switch (spec.swept_parameter) {
        case SweptParameter::ControllerMv:
            if (auto* vi = std::get_if<VirtualInertia>(&s.controller)) {
                vi->m_v = value;
            } else {
                not_applicable(spec.swept_parameter, s.controller);
            }
            break;
        case SweptParameter::ControllerAlphaB:
            set_alpha_b(s.controller, value);
            break;
        case SweptParameter::ControllerNu:
            if (auto* id = std::get_if<IDroop>(&s.controller)) {
                id->nu = value;
            } else {
                not_applicable(spec.swept_parameter, s.controller);
            }
            break;
        case SweptParameter::ControllerTauI:
            if (auto* id = std::get_if<IDroop>(&s.controller)) {
                id->tau_i = value;
            } else {
                not_applicable(spec.swept_parameter, s.controller);
            }
            break;
        case SweptParameter::GridInertia:
            s.grid.inertia_h = value;
            break;
        case SweptParameter::GridTurbineTau:
            s.grid.turbine_tau = value;
            break;
        case SweptParameter::GridDeadband:
            s.grid.deadband_omega_db = value;
            break;
        case SweptParameter::GridSecondaryGain:
            s.grid.secondary_gain_k_i = value;
            break;
        case SweptParameter::DisturbanceMagnitude:
            s.disturbance.step_magnitude = value;
            break;
    }
    apply_tuning(s, spec.derived_tuning);
    return s;
}

std::vector<double> linear_grid(double first, double last, double step) {
    if (!(step > 0.0) || last < first) {
        throw InvalidParameter("linear_grid requires step > 0 and last >= first");
    }
    const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 0.5));
    std::vector<double> v;
    v.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        v.push_back(first + static_cast<double>(i) * step);
    }
    return v;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads) {
    if (spec.values.empty()) {
        throw InvalidParameter("sweep values must be non-empty");
    }
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (!std::isfinite(spec.values[i]) || (i > 0 && spec.values[i] < spec.values[i - 1])) {
            throw InvalidParameter("sweep values must be finite and sorted");
        }
    }
    // surfaces a parameter/controller mismatch before any work starts
    (void)instantiate(spec, spec.values.front());

    std::vector<SweepRow> rows(spec.values.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = spec.values[i];
        try {
            row.metrics = simulate_metrics(instantiate(spec, row.value));
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

namespace {

void write_metrics_header(std::ostream& out) {
    out << "nadir_deviation_pu,nadir_time_s,rocof_initial_pu_s,rocof_max_abs_pu_s,"
           "steady_state_deviation_pu,settling_time_s,p_b_max_norm,p_b_max_abs_norm,"
           "e_b_max_norm_s,max_reversal_pu,monotone,error\n";
}

void write_metrics_fields(std::ostream& out, const std::optional<Metrics>& m, const std::string& error) {
    if (m) {
        out << format_csv(m->nadir_deviation) << ',' << format_csv(m->nadir_time) << ','
            << format_csv(m->rocof_initial) << ',' << format_csv(m->rocof_max_abs) << ','
            << format_csv(m->steady_state_deviation) << ',' << format_csv(m->settling_time) << ','
            << format_csv(m->p_b_max_norm) << ',' << format_csv(m->p_b_max_abs_norm) << ','
            << format_csv(m->e_b_max_norm) << ',' << format_csv(m->max_reversal) << ','
            << (m->monotone ? 1 : 0) << ',';
    } else {
        out << ",,,,,,,,,,,";
    }
    // errors are free text; keep the CSV one field wide
    std::string cleaned = error;
    std::replace(cleaned.begin(), cleaned.end(), ',', ';');
    out << cleaned << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, std::span<const SweepRow> rows) {
    out << parameter_name(spec.swept_parameter) << ',';
    write_metrics_header(out);
    for (const SweepRow& row : rows) {
        out << format_csv(row.value) << ',';
        write_metrics_fields(out, row.metrics, row.error);
    }
}

std::string_view strategy_name(CapacityStrategy s) {
    switch (s) {
        case CapacityStrategy::Droop:
            return "droop";
        case CapacityStrategy::ViMin:
            return "vi_min";
        case CapacityStrategy::IDroopTuned:
            return "idroop_tuned";
    }
    return "unknown";
}

std::vector<CapacityRow> capacity_curve(const GridParams& params, CapacityStrategy strategy,
                                        std::span<const double> delta_omega_grid,
                                        const CapacityOptions& options) {
    validate(params);
    std::vector<CapacityRow> rows(delta_omega_grid.size());
    parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        CapacityRow& row = rows[i];
        row.delta_omega = std::abs(delta_omega_grid[i]);
        try {
            row.alpha_b = design_droop_from_target(options.delta_p, row.delta_omega,
                                                   params.gen_inv_droop_alpha_g);
            const double unclamped =
                std::abs(options.delta_p / row.delta_omega) - params.gen_inv_droop_alpha_g;
            if (strategy != CapacityStrategy::Droop && unclamped < 0.0) {
                row.feasible = false;
                row.error = "target looser than the alpha_b = 0 operating point";
                return;
            }
            Scenario s;
            s.grid = params;
            s.disturbance.step_magnitude = options.delta_p;
            switch (strategy) {
                case CapacityStrategy::Droop:
                    s.controller = Droop{row.alpha_b};
                    break;
                case CapacityStrategy::ViMin:
                    s.controller =
                        VirtualInertia{std::max(0.0, mv_min_exact(params, row.alpha_b)), row.alpha_b};
                    break;
                case CapacityStrategy::IDroopTuned:
                    s.controller = nadir_tuned_idroop(params, row.alpha_b);
                    break;
            }
            s.sim.dt = options.dt;
            s.sim.horizon = options.transient_horizon;
            s.sim.freeze_secondary = true;
            const Metrics power = simulate_metrics(s);
            row.p_b_max_norm = power.p_b_max_norm;
            row.max_deviation = power.nadir_deviation;

            s.sim.horizon = options.energy_horizon;
            s.sim.freeze_secondary = false;
            s.grid.secondary_gain_k_i = options.energy_k_i;
            row.e_b_max_norm = simulate_metrics(s).e_b_max_norm;
        } catch (const Error& e) {
            row.feasible = false;
            row.error = e.what();
        }
    });
    return rows;
}

void write_capacity_csv(std::ostream& out, const GridParams& params,
                        std::span<const CapacityRow> rows) {
    out << "delta_omega_hz,delta_omega_pu,alpha_b_pu,feasible,p_b_max_norm,e_b_max_norm_s,"
           "max_deviation_pu,error\n";
    for (const CapacityRow& r : rows) {
        out << format_csv(hz_from_pu(r.delta_omega, params)) << ',' << format_csv(r.delta_omega)
            << ',' << format_csv(r.alpha_b) << ',' << (r.feasible ? 1 : 0) << ',';
        if (r.feasible) {
            out << format_csv(r.p_b_max_norm) << ',' << format_csv(r.e_b_max_norm) << ','
                << format_csv(r.max_deviation);
        } else {
            out << ",,";
        }
        std::string cleaned = r.error;
        std::replace(cleaned.begin(), cleaned.end(), ',', ';');
        out << ',' << cleaned << '\n';
    }
}

}  // namespace freqstore
