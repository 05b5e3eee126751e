#ifndef OPTEXPAND_SYNTHESIS_HPP
#define OPTEXPAND_SYNTHESIS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optexpand/dynamics.hpp"
#include "optexpand/elliptic.hpp"
#include "optexpand/errors.hpp"
#include "optexpand/quadrature.hpp"

namespace optexpand::synthesis {

// Time-optimal expansion schedule: a single X arc (u = -1) from (1,0)
// followed by a single Y arc (u = +1) into (gamma,0). The arc times have
// closed forms in incomplete elliptic integrals; independent quadrature of
// the defining time integrals serves as the ground truth.

// Constants of the elliptic-integral transformation chain, kept for
// diagnostics and serialized alongside results.
struct EllipticChainConstants {
    // X-arc (T1) chain
    double a, b;       // Moebius map parameters; a*b = -1
    double B1, B2;
    double p2, q2;
    double m, n;       // elliptic parameter and characteristic, n > 1
    double c, d;       // elementary-part constants
    double y_upper, z_upper, w_upper;
    // Y-arc (T2) chain
    double epsilon, zeta; // cubic roots, -epsilon < 0 < zeta < gamma
    double mu, nu;        // elliptic parameter and (negative) characteristic
    double x_upper;
};

enum class Method { closed_form, quadrature };

struct SynthesisResult {
    double gamma = 1.0;
    double beta = 1.0;          // switch locus in x1
    double x2_at_switch = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double T = 0.0;
    Method method = Method::closed_form;
    EllipticChainConstants chain{};
};

struct SolveOutput {
    SynthesisResult result;
    dynamics::BangBangSchedule schedule;
};

// Below this gap the closed-form chain loses accuracy to subtractive
// cancellation; the quadrature route takes over.
inline constexpr double degenerate_gamma_gap = 1e-6;

/// Switch locus beta(gamma): the x1 where the X and Y first integrals meet.
inline double switching_point(double gamma) {
    if (!(gamma >= 1.0))
        throw std::domain_error("switching_point: gamma must be >= 1, got " +
                                std::to_string(gamma));
    return std::sqrt((gamma * gamma * gamma - gamma + 2.0) / (2.0 * gamma));
}

/// X-arc time by adaptive quadrature of the defining integral. The
/// inverse-square-root endpoint singularity at x1 = 1 is removed by the
/// substitution x1 = 1 + s^2.
inline double t1_quadrature(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("t1_quadrature: gamma must exceed 1");
    const double beta = switching_point(gamma);
    // beta - 1 in factored form, stable down to gamma - 1 ~ 1e-8
    const double beta_minus_one =
        (gamma - 1.0) * (gamma - 1.0) * (gamma + 2.0) / (2.0 * gamma * (beta + 1.0));
    // x1 = 1 + s^2:  integrand becomes 2 sqrt((1+s^2)/(s^4+3s^2+4)).
    auto f = [](double s) {
        const double s2 = s * s;
        return 2.0 * std::sqrt((1.0 + s2) / (s2 * s2 + 3.0 * s2 + 4.0));
    };
    return quadrature::integrate(f, 0.0, std::sqrt(beta_minus_one), 1e-10);
}

/// Y-arc time by adaptive quadrature. x2^2 vanishes like a simple root at
/// both x1 = gamma and x1 = zeta, so x1 = gamma - (gamma-zeta) sin^2(phi)
/// absorbs both turning points at once: dt = 2 sqrt(x1/(x1+epsilon)) dphi,
/// a bounded smooth integrand for every gamma > 1. The root differences
/// gamma - zeta and gamma - beta are evaluated in cancellation-free form.
inline double t2_quadrature(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("t2_quadrature: gamma must exceed 1");
    const double beta = switching_point(gamma);
    const double root = std::sqrt(gamma * gamma + 8.0 / gamma);
    const double eps = 0.5 * (gamma + root);
    // gamma - zeta = 4 (gamma^3 - 1) / (gamma (3 gamma + root))
    const double gamma_minus_zeta = 4.0 * (gamma - 1.0) * (gamma * gamma + gamma + 1.0) /
                                    (gamma * (3.0 * gamma + root));
    // gamma - beta = (gamma - 1)(gamma^2 + gamma + 2) / (2 gamma (gamma + beta))
    const double gamma_minus_beta = (gamma - 1.0) * (gamma * gamma + gamma + 2.0) /
                                    (2.0 * gamma * (gamma + beta));
    const double phi_max = std::asin(std::sqrt(gamma_minus_beta / gamma_minus_zeta));
    auto f = [=](double phi) {
        const double s = std::sin(phi);
        const double x1 = gamma - gamma_minus_zeta * s * s;
        return 2.0 * std::sqrt(x1 / (x1 + eps));
    };
    return quadrature::integrate(f, 0.0, phi_max, 1e-10);
}

namespace detail {

inline void fill_t1_constants(EllipticChainConstants& k) {
    const double r2 = std::numbers::sqrt2;
    k.a = -(r2 + 1.0); // == -(sqrt2-1)/(3-2 sqrt2)
    k.b = r2 - 1.0;    // == (1+sqrt2)/(3+2 sqrt2)
    k.B1 = (1.0 + 2.0 * r2) / (4.0 * r2);
    k.B2 = (3.0 + 2.0 * r2) / (4.0 * r2);
    k.p2 = (2.0 * r2 - 1.0) / (2.0 * r2 + 1.0);
    k.q2 = (3.0 - 2.0 * r2) / (3.0 + 2.0 * r2);
    k.m = k.p2 / (k.p2 + k.q2);
    k.n = 1.0 / (1.0 - k.q2);
    k.c = (1.0 + k.p2) * (1.0 - k.q2);
    k.d = 2.0 + k.p2 - k.q2;
}

inline double t1_closed_form_impl(double gamma, EllipticChainConstants& k) {
    fill_t1_constants(k);
    const double q = std::sqrt(k.q2);

    // Chain sanity: the Moebius image of the lower limit x1 = 1 must be q.
    const double y_lower = (1.0 - k.b) / (1.0 - k.a);
    if (std::fabs(y_lower - q) > 1e-12)
        throw std::logic_error("t1_closed_form: y(1) != q, transformation chain broken");

    const double beta = switching_point(gamma);
    const double y = (beta - k.b) / (beta - k.a);
    k.y_upper = y;
    const double z = std::sqrt(1.0 - k.q2 / (y * y));
    k.z_upper = z;

    const double I1 =
        (k.b * elliptic::ellip_f(z, k.m) +
         (k.b - k.a) * k.q2 / (1.0 - k.q2) * elliptic::ellip_pi(k.n, z, k.m)) /
        std::sqrt(k.p2 + k.q2);

    const double w = (2.0 * k.c / (1.0 - y * y) - k.d) / (k.p2 + k.q2);
    k.w_upper = w;
    // ln|w + sqrt(w^2-1)| = acosh(w) for w >= 1, stable near w = 1.
    const double I2 = std::acosh(std::max(w, 1.0)) / (2.0 * std::sqrt(k.c));

    return (I1 / (k.b - k.a) + I2) / std::sqrt(k.B1 * k.B2);
}

inline double t2_closed_form_impl(double gamma, EllipticChainConstants& k) {
    const double beta = switching_point(gamma);
    const double root = std::sqrt(gamma * gamma + 8.0 / gamma);
    k.epsilon = 0.5 * (gamma + root);
    k.zeta = 0.5 * (-gamma + root);
    const double eps = k.epsilon, zet = k.zeta;
    k.mu = eps * (gamma - zet) / (gamma * (eps + zet));
    k.nu = -(gamma - zet) / (eps + zet);
    const double x =
        std::sqrt((eps + zet) * (gamma - beta) / ((gamma - zet) * (beta + eps)));
    k.x_upper = x;
    return 2.0 / std::sqrt(gamma * (eps + zet)) *
           ((gamma + eps) * elliptic::ellip_pi(k.nu, x, k.mu) -
            eps * elliptic::ellip_f(x, k.mu));
}

} // namespace detail

/// X-arc time via the closed-form elliptic chain.
inline double t1_closed_form(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("t1_closed_form: gamma must exceed 1");
    EllipticChainConstants k{};
    return detail::t1_closed_form_impl(gamma, k);
}

/// Y-arc time via the closed-form elliptic chain (negative characteristic).
inline double t2_closed_form(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("t2_closed_form: gamma must exceed 1");
    EllipticChainConstants k{};
    return detail::t2_closed_form_impl(gamma, k);
}

/// Leading-order large-gamma model: T1 ~ ln gamma, T2 -> pi/4.
inline double asymptotic_time(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("asymptotic_time: gamma must exceed 1");
    return std::log(gamma) + std::numbers::pi / 4.0;
}

/// Full synthesis for one expansion factor: switch locus, arc times, and the
/// two-segment bang-bang schedule with its boundary jump annotations.
inline SolveOutput solve(double gamma) {
    if (!(gamma >= 1.0)) throw std::domain_error("solve: gamma must be >= 1");
    SolveOutput out;
    SynthesisResult& r = out.result;
    r.gamma = gamma;
    out.schedule.jump_before = 1.0;
    out.schedule.jump_after = 1.0 / (gamma * gamma * gamma);
    if (gamma == 1.0) {
        r.method = Method::closed_form;
        return out; // already at the target: T = 0, no segments
    }
    r.beta = switching_point(gamma);
    const double v2 = 1.0 + r.beta * r.beta - 2.0 / r.beta; // from the X first integral
    r.x2_at_switch = std::sqrt(std::max(v2, 0.0));
    if (gamma - 1.0 < degenerate_gamma_gap) {
        r.method = Method::quadrature;
        r.T1 = t1_quadrature(gamma);
        r.T2 = t2_quadrature(gamma);
    } else {
        r.method = Method::closed_form;
        r.T1 = detail::t1_closed_form_impl(gamma, r.chain);
        r.T2 = detail::t2_closed_form_impl(gamma, r.chain);
    }
    r.T = r.T1 + r.T2;
    out.schedule.segments = {{-1.0, r.T1}, {+1.0, r.T2}};
    return out;
}

} // namespace optexpand::synthesis

#endif
