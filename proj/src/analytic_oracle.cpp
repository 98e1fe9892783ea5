#include "freqstore/analytic_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "freqstore/errors.hpp"

namespace freqstore {

using cd = std::complex<double>;

std::complex<double> poly_eval(std::span<const double> coeffs, cd s) {
    cd acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * s + coeffs[i];
    }
    return acc;
}

int poly_degree(std::span<const double> coeffs) {
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] != 0.0) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

double root_residual(std::span<const double> coeffs, cd root) {
    double scale = 0.0;
    double power = 1.0;
    for (double c : coeffs) {
        scale += std::abs(c) * power;
        power *= std::abs(root);
    }
    return scale == 0.0 ? 0.0 : std::abs(poly_eval(coeffs, root)) / scale;
}

namespace {

cd poly_derivative_eval(std::span<const double> coeffs, cd s) {
    cd acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) {
        acc = acc * s + static_cast<double>(i) * coeffs[i];
    }
    return acc;
}

std::vector<cd> quadratic_roots(double c, double b, double a) {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        if (q == 0.0) {
            return {cd(0.0), cd(0.0)};
        }
        return {cd(q / a), cd(c / q)};
    }
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-disc) / (2.0 * a);
    return {cd(re, im), cd(re, -im)};
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
    Polynomial r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Polynomial poly_scale(Polynomial p, double k) {
    for (double& c : p) c *= k;
    return p;
}

void trim(Polynomial& p) {
    while (p.size() > 1 && p.back() == 0.0) {
        p.pop_back();
    }
}

// p(s) / (s - z), remainder dropped.
Polynomial deflate(const Polynomial& p, double z) {
    const std::size_t n = p.size() - 1;
    Polynomial q(n, 0.0);
    double carry = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        carry = p[i + 1] + carry * z;
        q[i] = carry;
    }
    return q;
}

}  // namespace

std::vector<cd> poly_roots(std::span<const double> coeffs) {
    const int deg = poly_degree(coeffs);
    if (deg <= 0) {
        return {};
    }
    if (deg == 1) {
        return {cd(-coeffs[0] / coeffs[1])};
    }
    if (deg == 2) {
        return quadratic_roots(coeffs[0], coeffs[1], coeffs[2]);
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) {
        companion(0, i) = -coeffs[static_cast<std::size_t>(deg - 1 - i)] / coeffs[static_cast<std::size_t>(deg)];
        if (i + 1 < deg) {
            companion(i + 1, i) = 1.0;
        }
    }
    const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
    std::vector<cd> roots(eig.data(), eig.data() + eig.size());
    for (cd& r : roots) {
        for (int it = 0; it < 4; ++it) {
            const cd d = poly_derivative_eval(coeffs, r);
            if (std::abs(d) == 0.0) break;
            const cd step = poly_eval(coeffs, r) / d;
            r -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
        }
        if (std::abs(r.imag()) <= 1e-14 * std::abs(r)) {
            r = cd(r.real(), 0.0);
        }
    }
    return roots;
}

ClosedLoopLti closed_loop_tf(const GridParams& params, const ControllerConfig& cfg) {
    validate(params);
    validate(cfg);
    if (params.deadband_omega_db > 0.0) {
        throw InvalidParameter("closed-form analysis requires a linear governor (no dead-band)");
    }
    const double two_h = 2.0 * params.inertia_h;
    const double tau = params.turbine_tau;
    const double al = params.load_damping_alpha_l;
    const double ag = params.gen_inv_droop_alpha_g;

    ClosedLoopLti lti;
    lti.label = std::string(controller_kind(cfg));

    if (const auto* id = std::get_if<IDroop>(&cfg)) {
        // 1 / [2Hs + alpha_L + nu + alpha_g/(tau s+1) - (nu - alpha_b)/(tau_i s+1)], cleared of fractions
        const Polynomial turbine{1.0, tau};
        const Polynomial lag{1.0, id->tau_i};
        const Polynomial both = poly_mul(turbine, lag);
        lti.num = poly_scale(both, -1.0);
        lti.den = poly_add(poly_mul(Polynomial{al + id->nu, two_h}, both),
                           poly_add(poly_scale(lag, ag), poly_scale(turbine, -(id->nu - id->alpha_b))));
    } else {
        const double m = two_h + storage_inertia(cfg);
        const double ab = storage_droop(cfg);
        lti.num = {-1.0, -tau};
        lti.den = {al + ab + ag, tau * (al + ab) + m, m * tau};
    }
    trim(lti.den);

    // pole-zero cancellation (iDroop lag against the turbine lag)
    for (bool reduced = true; reduced;) {
        reduced = false;
        for (const cd z : poly_roots(lti.num)) {
            if (z.imag() != 0.0 || poly_degree(lti.den) < 1) continue;
            if (root_residual(lti.den, z) <= 1e-9) {
                lti.num = deflate(lti.num, z.real());
                lti.den = deflate(lti.den, z.real());
                reduced = true;
                break;
            }
        }
    }
    const double k = -1.0 / lti.num.front();
    lti.num = poly_scale(lti.num, k);
    lti.den = poly_scale(lti.den, k);

    lti.poles = poly_roots(lti.den);
    lti.stable = std::all_of(lti.poles.begin(), lti.poles.end(),
                             [](const cd& p) { return p.real() < 0.0; });
    return lti;
}

namespace {

double coeff(const Polynomial& p, std::size_t i) { return i < p.size() ? p[i] : 0.0; }

// Impulse response of (n1 s + n0) / (a s^2 + b s + c), written with the mean
// pole m and the half split d (d^2 = m^2 - c/a) so that distinct real,
// repeated and complex poles share one continuous expression:
//   h(t) = e^{mt} [ n1 C(t) + (n1 m + n0) S(t) ] / a,
//   C = cosh(d t), S = sinh(d t) / d.
double second_order_impulse(double n1, double n0, double a, double b, double c, double t) {
    const double m = -b / (2.0 * a);
    const double d2 = m * m - c / a;
    const double k = n1 * m + n0;
    const double x2 = d2 * t * t;
    double ec;  // e^{mt} C(t)
    double es;  // e^{mt} S(t)
    if (std::abs(x2) < 1e-6) {
        // repeated (or nearly repeated) pole: t e^{mt} mode plus series correction
        const double em = std::exp(m * t);
        ec = em * (1.0 + x2 / 2.0 + x2 * x2 / 24.0);
        es = em * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
    } else if (d2 > 0.0) {
        const double d = std::sqrt(d2);
        const double e1 = std::exp((m + d) * t);
        const double e2 = std::exp((m - d) * t);
        ec = 0.5 * (e1 + e2);
        es = (e1 - e2) / (2.0 * d);
    } else {
        const double w = std::sqrt(-d2);
        const double em = std::exp(m * t);
        ec = em * std::cos(w * t);
        es = em * std::sin(w * t) / w;
    }
    return (n1 * ec + k * es) / a;
}

void require_oracle_order(const ClosedLoopLti& lti) {
    const int dd = poly_degree(lti.den);
    if (dd < 1 || dd > 2) {
        throw UnsupportedOrder("closed-form step response supports orders 1 and 2, got " +
                               std::to_string(dd));
    }
    if (poly_degree(lti.num) >= dd) {
        throw InvalidParameter("closed-form step response requires a strictly proper transfer function");
    }
}

}  // namespace

double final_value(const ClosedLoopLti& lti, double delta_p) {
    return delta_p * coeff(lti.num, 0) / coeff(lti.den, 0);
}

double step_response(const ClosedLoopLti& lti, double delta_p, double t) {
    require_oracle_order(lti);
    if (t < 0.0) {
        throw InvalidParameter("step response requires t >= 0");
    }
    const double n0 = coeff(lti.num, 0);
    const double n1 = coeff(lti.num, 1);
    const double c = coeff(lti.den, 0);
    const double b = coeff(lti.den, 1);
    if (poly_degree(lti.den) == 1) {
        return delta_p * (n0 / c) * (1.0 - std::exp(-c * t / b));
    }
    const double a = coeff(lti.den, 2);
    // G(s)/s = G(0)/s + Q(s)/D(s),  Q(s) = (-n0 a s + n1 c - n0 b) / c
    const double q1 = -n0 * a / c;
    const double q0 = (n1 * c - n0 * b) / c;
    return delta_p * (n0 / c + second_order_impulse(q1, q0, a, b, c, t));
}

namespace {

// y(t) - y(inf) for a second-order loop, evaluated without subtracting the
// final value so that tiny overshoots keep their sign.
double transient_part(const ClosedLoopLti& lti, double delta_p, double t) {
    const double n0 = coeff(lti.num, 0);
    const double n1 = coeff(lti.num, 1);
    const double c = coeff(lti.den, 0);
    const double b = coeff(lti.den, 1);
    const double a = coeff(lti.den, 2);
    return delta_p * second_order_impulse(-n0 * a / c, (n1 * c - n0 * b) / c, a, b, c, t);
}

}  // namespace

double step_response_rate(const ClosedLoopLti& lti, double delta_p, double t) {
    require_oracle_order(lti);
    const double n0 = coeff(lti.num, 0);
    const double n1 = coeff(lti.num, 1);
    const double c = coeff(lti.den, 0);
    const double b = coeff(lti.den, 1);
    if (poly_degree(lti.den) == 1) {
        return delta_p * (n0 / b) * std::exp(-c * t / b);
    }
    return delta_p * second_order_impulse(n1, n0, coeff(lti.den, 2), b, c, t);
}

std::optional<NadirPoint> nadir_of_response(const ClosedLoopLti& lti, double delta_p) {
    require_oracle_order(lti);
    if (!lti.stable) {
        throw InvalidParameter("Nadir analysis requires a stable closed loop");
    }
    if (poly_degree(lti.den) == 1) {
        return std::nullopt;
    }
    const double n0 = coeff(lti.num, 0);
    const double n1 = coeff(lti.num, 1);
    const double c = coeff(lti.den, 0);
    const double b = coeff(lti.den, 1);
    const double a = coeff(lti.den, 2);
    const double m = -b / (2.0 * a);
    const double d2 = m * m - c / a;
    const double k = n1 * m + n0;

    // zero of n1 C(t) + k S(t) for t > 0
    double t_star = -1.0;
    if (std::abs(d2) <= kStationaryTolerance * m * m) {
        if (k != 0.0) t_star = -n1 / k;
    } else if (d2 > 0.0) {
        const double d = std::sqrt(d2);
        if (k != 0.0) {
            const double r = -n1 * d / k;
            if (r > 0.0 && r < 1.0) t_star = std::atanh(r) / d;
        }
    } else {
        const double w = std::sqrt(-d2);
        double theta = std::atan2(k / w, n1) + std::numbers::pi / 2.0;
        if (theta > std::numbers::pi) theta -= std::numbers::pi;
        if (theta <= 0.0) theta += std::numbers::pi;
        t_star = theta / w;
    }
    if (!(t_star > 0.0) || !std::isfinite(t_star)) {
        return std::nullopt;
    }
    const double value = step_response(lti, delta_p, t_star);
    const double overshoot = -transient_part(lti, delta_p, t_star) * (delta_p > 0.0 ? 1.0 : -1.0);
    if (!(overshoot > 0.0)) {
        return std::nullopt;
    }
    return NadirPoint{.nadir = value, .time = t_star};
}

}  // namespace freqstore
