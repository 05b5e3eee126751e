#ifndef OPTEXPAND_ELLIPTIC_HPP
#define OPTEXPAND_ELLIPTIC_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace optexpand::elliptic {

// Incomplete elliptic integrals of the first and third kind in Jacobi's form,
//
//   F(z,m)    = int_0^z dx / sqrt((1-x^2)(1-m x^2))
//   Pi(n,z,m) = int_0^z dx / ((1-n x^2) sqrt((1-x^2)(1-m x^2)))
//
// evaluated through Carlson symmetric forms with the duplication theorem.
// The characteristic n may be negative (circular case) or exceed 1 as long
// as n x^2 does not cross 1 on [0,z].

namespace detail {

// Carlson R_F(x,y,z). Duplication until the arguments are nearly equal,
// then a fifth-order Taylor tail. Relative error ~ errtol^6.
inline double carlson_rf(double x, double y, double z) {
    constexpr double errtol = 0.0012;
    double xt = x, yt = y, zt = z;
    double mu, dx, dy, dz;
    do {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        mu = (xt + yt + zt) / 3.0;
        dx = (mu - xt) / mu;
        dy = (mu - yt) / mu;
        dz = (mu - zt) / mu;
    } while (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) > errtol);
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

// Carlson R_C(x,y) for y > 0.
inline double carlson_rc(double x, double y) {
    constexpr double errtol = 0.0006;
    double xt = x, yt = y;
    double mu, s;
    do {
        const double lam = 2.0 * std::sqrt(xt) * std::sqrt(yt) + yt;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        mu = (xt + 2.0 * yt) / 3.0;
        s = (yt - xt) / (3.0 * mu);
    } while (std::fabs(s) > errtol);
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) /
           std::sqrt(mu);
}

// Carlson R_J(x,y,z,p) for p > 0.
inline double carlson_rj(double x, double y, double z, double p) {
    constexpr double errtol = 0.0009;
    constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0, c4 = 3.0 / 26.0;
    constexpr double c5 = 0.75 * c3, c6 = 1.5 * c4, c7 = 0.5 * c2, c8 = 2.0 * c3;
    double xt = x, yt = y, zt = z, pt = p;
    double sum = 0.0, fac = 1.0;
    double mu, dx, dy, dz, dp;
    do {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        double alpha = pt * (sx + sy + sz) + sx * sy * sz;
        alpha *= alpha;
        const double beta = pt * (pt + lam) * (pt + lam);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        pt = 0.25 * (pt + lam);
        mu = (xt + yt + zt + 2.0 * pt) / 5.0;
        dx = (mu - xt) / mu;
        dy = (mu - yt) / mu;
        dz = (mu - zt) / mu;
        dp = (mu - pt) / mu;
    } while (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz), std::fabs(dp)}) > errtol);
    const double ea = dx * (dy + dz) + dy * dz;
    const double eb = dx * dy * dz;
    const double ec = dp * dp;
    const double ed = ea - 3.0 * ec;
    const double ee = eb + 2.0 * dp * (ea - ec);
    const double tail = 1.0 + ed * (-c1 + c5 * ed - c6 * ee) +
                        eb * (c7 + dp * (-c8 + dp * c4)) + dp * ea * (c2 - dp * c3) -
                        c2 * dp * ec;
    return 3.0 * sum + fac * tail / (mu * std::sqrt(mu));
}

inline void check_range(double z, double m, const char* who) {
    if (!(z >= 0.0 && z <= 1.0))
        throw std::domain_error(std::string(who) + ": upper limit z must lie in [0,1], got z=" +
                                std::to_string(z));
    if (!(m * z * z < 1.0))
        throw std::domain_error(std::string(who) + ": m z^2 >= 1, integrand singular");
}

} // namespace detail

/// F(z,m), absolute error well below 1e-12 for admissible arguments.
inline double ellip_f(double z, double m) {
    detail::check_range(z, m, "ellip_f");
    if (z == 0.0) return 0.0;
    const double z2 = z * z;
    return z * detail::carlson_rf(1.0 - z2, 1.0 - m * z2, 1.0);
}

/// Pi(n,z,m). The characteristic may be negative; n x^2 = 1 must not be
/// crossed on the integration range.
inline double ellip_pi(double n, double z, double m) {
    detail::check_range(z, m, "ellip_pi");
    const double z2 = z * z;
    if (n > 0.0 && n * z2 >= 1.0)
        throw std::domain_error("ellip_pi: pole n x^2 = 1 crossed on [0,z]");
    if (std::fabs(1.0 - n * z2) < 1e-10)
        throw std::domain_error("ellip_pi: upper limit too close to the pole n z^2 = 1");
    if (z == 0.0) return 0.0;
    const double rf = detail::carlson_rf(1.0 - z2, 1.0 - m * z2, 1.0);
    const double rj = detail::carlson_rj(1.0 - z2, 1.0 - m * z2, 1.0, 1.0 - n * z2);
    return z * rf + (n / 3.0) * z * z2 * rj;
}

} // namespace optexpand::elliptic

#endif
