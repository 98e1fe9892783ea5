#include "freqstore/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "freqstore/errors.hpp"
#include "freqstore/tuning.hpp"

namespace freqstore {
namespace {

enum class Domain { Any, Positive, NonNegative, Fraction };

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    Reader(std::string_view text, std::string source) : source_(std::move(source)) { read(text); }

    Scenario build(const ScenarioOverrides& overrides) {
        Scenario s;
        s.grid = table1_params();
        read_grid(s.grid);
        read_disturbance(s);
        read_sim(s.sim);
        if (overrides) {
            try {
                overrides(s);
            } catch (const InvalidParameter& e) {
                throw ParseError(source_, 0, std::string("override: ") + e.what());
            }
        }
        read_controller(s);
        try {
            validate(s);
        } catch (const InvalidParameter& e) {
            throw ParseError(source_, 0, e.what());
        }
        return s;
    }

private:
    [[noreturn]] void fail(int line, const std::string& msg) const { throw ParseError(source_, line, msg); }

    void read(std::string_view text) {
        static const std::map<std::string, int, std::less<>> known{
            {"grid", 0}, {"controller", 0}, {"disturbance", 0}, {"sim", 0}};
        Section* current = nullptr;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "malformed section header");
                const std::string name(trim(line.substr(1, line.size() - 2)));
                if (!known.contains(name)) fail(line_no, "unknown section [" + name + "]");
                if (sections_.contains(name)) fail(line_no, "duplicate section [" + name + "]");
                current = &sections_[name];
                section_lines_[name] = line_no;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
            if (current == nullptr) fail(line_no, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) fail(line_no, "empty key");
            if (value.empty()) fail(line_no, "empty value for '" + key + "'");
            if (current->contains(key)) fail(line_no, "duplicate key '" + key + "'");
            (*current)[key] = Entry{value, line_no};
        }
    }

    Section& section(const std::string& name) { return sections_[name]; }

    void check_keys(const std::string& name, std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, entry] : section(name)) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(entry.line, "unknown key '" + key + "' in [" + name + "]");
            }
        }
    }

    double number(const Entry& e, const std::string& key, Domain domain) const {
        double v = 0.0;
        const char* first = e.value.data();
        const char* last = first + e.value.size();
        if (*first == '+') ++first;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
            fail(e.line, "'" + key + "' expects a number, got '" + e.value + "'");
        }
        switch (domain) {
            case Domain::Positive:
                if (!(v > 0)) fail(e.line, "'" + key + "' must be > 0");
                break;
            case Domain::NonNegative:
                if (!(v >= 0)) fail(e.line, "'" + key + "' must be >= 0");
                break;
            case Domain::Fraction:
                if (!(v > 0 && v < 1)) fail(e.line, "'" + key + "' must lie in (0, 1)");
                break;
            case Domain::Any:
                break;
        }
        return v;
    }

    std::optional<double> get(const std::string& sec, const std::string& key, Domain domain) {
        const Section& s = section(sec);
        const auto it = s.find(key);
        if (it == s.end()) return std::nullopt;
        return number(it->second, key, domain);
    }

    void assign(const std::string& sec, const std::string& key, Domain domain, double& field) {
        if (auto v = get(sec, key, domain)) field = *v;
    }

    void exclusive(const std::string& sec, const std::string& a, const std::string& b) {
        const Section& s = section(sec);
        if (s.contains(a) && s.contains(b)) {
            fail(s.find(b)->second.line, "'" + a + "' and '" + b + "' are mutually exclusive");
        }
    }

    void read_grid(GridParams& g) {
        check_keys("grid", {"base_power", "nominal_freq", "inertia_h", "turbine_tau",
                            "load_damping_alpha_l", "gen_inv_droop_alpha_g", "secondary_gain_k_i",
                            "deadband_omega_db", "deadband_hz"});
        exclusive("grid", "deadband_omega_db", "deadband_hz");
        assign("grid", "base_power", Domain::Positive, g.base_power);
        assign("grid", "nominal_freq", Domain::Positive, g.nominal_freq);
        assign("grid", "inertia_h", Domain::Positive, g.inertia_h);
        assign("grid", "turbine_tau", Domain::Positive, g.turbine_tau);
        assign("grid", "load_damping_alpha_l", Domain::NonNegative, g.load_damping_alpha_l);
        assign("grid", "gen_inv_droop_alpha_g", Domain::Positive, g.gen_inv_droop_alpha_g);
        assign("grid", "secondary_gain_k_i", Domain::NonNegative, g.secondary_gain_k_i);
        assign("grid", "deadband_omega_db", Domain::NonNegative, g.deadband_omega_db);
        if (auto hz = get("grid", "deadband_hz", Domain::NonNegative)) {
            g.deadband_omega_db = pu_from_hz(*hz, g);
        }
    }

    void read_disturbance(Scenario& s) {
        check_keys("disturbance", {"step_magnitude", "step_gw", "step_time"});
        exclusive("disturbance", "step_magnitude", "step_gw");
        assign("disturbance", "step_magnitude", Domain::Any, s.disturbance.step_magnitude);
        if (auto gw = get("disturbance", "step_gw", Domain::Any)) {
            s.disturbance.step_magnitude = pu_disturbance(*gw, s.grid);
        }
        assign("disturbance", "step_time", Domain::NonNegative, s.disturbance.step_time);
    }

    void read_sim(SimOptions& o) {
        check_keys("sim", {"dt", "horizon", "settling_band", "freeze_secondary"});
        assign("sim", "dt", Domain::Positive, o.dt);
        assign("sim", "horizon", Domain::Positive, o.horizon);
        assign("sim", "settling_band", Domain::Fraction, o.settling_band);
        const Section& s = section("sim");
        if (const auto it = s.find("freeze_secondary"); it != s.end()) {
            const std::string& v = it->second.value;
            if (v == "true" || v == "yes" || v == "1") {
                o.freeze_secondary = true;
            } else if (v == "false" || v == "no" || v == "0") {
                o.freeze_secondary = false;
            } else {
                fail(it->second.line, "'freeze_secondary' expects true or false");
            }
        }
        if (o.dt > o.horizon) fail(s.contains("dt") ? s.find("dt")->second.line : 0, "dt exceeds horizon");
    }

    void read_controller(Scenario& s) {
        const Section& sec = section("controller");
        std::string type = "none";
        int type_line = section_lines_.contains("controller") ? section_lines_["controller"] : 0;
        if (const auto it = sec.find("type"); it != sec.end()) {
            type = it->second.value;
            type_line = it->second.line;
        }
        const auto tuning_it = sec.find("tuning");
        const bool tuned = tuning_it != sec.end();
        if (tuned && tuning_it->second.value != "nadir") {
            fail(tuning_it->second.line, "'tuning' only accepts 'nadir'");
        }
        double alpha_b = 0.0;

        if (type == "none") {
            check_keys("controller", {"type"});
            s.controller = NoStorage{};
        } else if (type == "droop") {
            check_keys("controller", {"type", "alpha_b"});
            assign("controller", "alpha_b", Domain::NonNegative, alpha_b);
            s.controller = Droop{alpha_b};
        } else if (type == "virtual_inertia") {
            if (tuned) {
                check_keys("controller", {"type", "alpha_b", "tuning"});
            } else {
                check_keys("controller", {"type", "alpha_b", "m_v"});
            }
            assign("controller", "alpha_b", Domain::NonNegative, alpha_b);
            double m_v = 0.0;
            assign("controller", "m_v", Domain::NonNegative, m_v);
            if (tuned) m_v = std::max(0.0, mv_min_exact(s.grid, alpha_b));
            s.controller = VirtualInertia{m_v, alpha_b};
        } else if (type == "idroop") {
            if (tuned) {
                check_keys("controller", {"type", "alpha_b", "tuning"});
            } else {
                check_keys("controller", {"type", "alpha_b", "nu", "tau_i"});
            }
            assign("controller", "alpha_b", Domain::NonNegative, alpha_b);
            if (tuned) {
                s.controller = nadir_tuned_idroop(s.grid, alpha_b);
            } else {
                IDroop c{.nu = alpha_b + s.grid.gen_inv_droop_alpha_g,
                         .tau_i = s.grid.turbine_tau,
                         .alpha_b = alpha_b};
                assign("controller", "nu", Domain::Positive, c.nu);
                assign("controller", "tau_i", Domain::Positive, c.tau_i);
                s.controller = c;
            }
        } else {
            fail(type_line, "unknown controller type '" + type +
                                "' (expected none, droop, virtual_inertia, idroop)");
        }
    }

    std::string source_;
    std::map<std::string, Section, std::less<>> sections_;
    std::map<std::string, int, std::less<>> section_lines_;
};

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source,
                        const ScenarioOverrides& overrides) {
    return Reader(text, source).build(overrides);
}

Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string(), overrides);
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    const auto kv = [&](std::string_view key, double v) {
        out << key << " = " << format_double(v) << '\n';
    };
    out << "[grid]\n";
    kv("base_power", s.grid.base_power);
    kv("nominal_freq", s.grid.nominal_freq);
    kv("inertia_h", s.grid.inertia_h);
    kv("turbine_tau", s.grid.turbine_tau);
    kv("load_damping_alpha_l", s.grid.load_damping_alpha_l);
    kv("gen_inv_droop_alpha_g", s.grid.gen_inv_droop_alpha_g);
    kv("secondary_gain_k_i", s.grid.secondary_gain_k_i);
    kv("deadband_omega_db", s.grid.deadband_omega_db);

    out << "\n[controller]\ntype = " << controller_kind(s.controller) << '\n';
    if (const auto* d = std::get_if<Droop>(&s.controller)) {
        kv("alpha_b", d->alpha_b);
    } else if (const auto* vi = std::get_if<VirtualInertia>(&s.controller)) {
        kv("m_v", vi->m_v);
        kv("alpha_b", vi->alpha_b);
    } else if (const auto* id = std::get_if<IDroop>(&s.controller)) {
        kv("nu", id->nu);
        kv("tau_i", id->tau_i);
        kv("alpha_b", id->alpha_b);
    }

    out << "\n[disturbance]\n";
    kv("step_magnitude", s.disturbance.step_magnitude);
    kv("step_time", s.disturbance.step_time);

    out << "\n[sim]\n";
    kv("dt", s.sim.dt);
    kv("horizon", s.sim.horizon);
    kv("settling_band", s.sim.settling_band);
    out << "freeze_secondary = " << (s.sim.freeze_secondary ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace freqstore
