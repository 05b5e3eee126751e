#ifndef OPTEXPAND_DYNAMICS_HPP
#define OPTEXPAND_DYNAMICS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optexpand/errors.hpp"
#include "optexpand/quadrature.hpp"

namespace optexpand::dynamics {

// Reduced planar system for the condensate scale factor:
//   x1' = x2,   x2' = -u x1 + 1/x1^2,   u in [-1, 1].
// x1 is the scale factor b, x2 its velocity in units of the initial trap
// frequency. The repulsive 1/x1^2 term keeps x1 positive.

struct ReducedState {
    double x1;
    double x2;
};

struct Segment {
    double u;        // constant control value, in [-1, 1]
    double duration; // >= 0
};

// Piecewise-constant control. The boundary jump values u(0-) and u(T+) are
// part of the physical protocol but carry no duration; they are recorded,
// never integrated.
struct BangBangSchedule {
    std::vector<Segment> segments;
    double jump_before = 1.0;
    double jump_after = 1.0;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }
};

struct TrajectoryPoint {
    double t;
    double x1;
    double x2;
    double u; // control active immediately after time t (last point repeats the final u)
};

using Trajectory = std::vector<TrajectoryPoint>;

inline ReducedState vector_field(const ReducedState& s, double u) {
    if (!(s.x1 > 0.0))
        throw std::domain_error("vector_field: x1 must be positive, got " +
                                std::to_string(s.x1));
    return {s.x2, -u * s.x1 + 1.0 / (s.x1 * s.x1)};
}

/// Conserved along u = -1 arcs; equals 1 on the arc leaving (1,0).
inline double first_integral_X(const ReducedState& s) {
    if (!(s.x1 > 0.0)) throw std::domain_error("first_integral_X: x1 must be positive");
    // extended precision keeps the large-x1 cancellation below 1e-12
    const long double x1 = s.x1, x2 = s.x2;
    return static_cast<double>(x2 * x2 - x1 * x1 + 2.0L / x1);
}

/// Conserved along u = +1 arcs; equals gamma^2 + 2/gamma on the arc ending
/// at (gamma, 0).
inline double first_integral_Y(const ReducedState& s) {
    if (!(s.x1 > 0.0)) throw std::domain_error("first_integral_Y: x1 must be positive");
    const long double x1 = s.x1, x2 = s.x2;
    return static_cast<double>(x2 * x2 + x1 * x1 + 2.0L / x1);
}

struct PropagateOptions {
    double tol = 1e-10;       // local error tolerance (abs and rel)
    double x1_floor = 1e-6;   // abort below this scale factor
    std::size_t max_steps = 2'000'000;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th-order embedded weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

// Integrate one interval with a (possibly time-dependent) control, appending
// accepted steps to the trajectory. t0 is the absolute time at entry.
template <class Control>
void integrate_interval(ReducedState& s, double t0, double duration, Control&& u_of_t,
                        const PropagateOptions& opt, Trajectory& out) {
    using D = Dopri5;
    if (duration < 0.0) throw std::domain_error("propagate: negative segment duration");
    if (duration == 0.0) return;

    auto rhs = [&](double t, const ReducedState& y) -> ReducedState {
        if (!(y.x1 > opt.x1_floor))
            throw std::runtime_error(
                "propagate: x1 fell below the floor (" + std::to_string(opt.x1_floor) +
                "); scale factor too small for the reduced model");
        const double u = u_of_t(t);
        return {y.x2, -u * y.x1 + 1.0 / (y.x1 * y.x1)};
    };

    double t = 0.0;
    double h = std::min(duration, 1e-2);
    ReducedState k1 = rhs(t0, s);
    std::size_t steps = 0;
    while (t < duration) {
        if (++steps > opt.max_steps)
            throw convergence_error("propagate: step limit exceeded");
        if (t + h > duration) h = duration - t;

        auto at = [&](double f1, double f2) -> ReducedState {
            return {s.x1 + h * f1, s.x2 + h * f2};
        };
        const double tt = t0 + t;
        ReducedState k2 = rhs(tt + D::c2 * h, at(D::a21 * k1.x1, D::a21 * k1.x2));
        ReducedState k3 = rhs(tt + D::c3 * h, at(D::a31 * k1.x1 + D::a32 * k2.x1,
                                                 D::a31 * k1.x2 + D::a32 * k2.x2));
        ReducedState k4 =
            rhs(tt + D::c4 * h, at(D::a41 * k1.x1 + D::a42 * k2.x1 + D::a43 * k3.x1,
                                   D::a41 * k1.x2 + D::a42 * k2.x2 + D::a43 * k3.x2));
        ReducedState k5 = rhs(
            tt + D::c5 * h,
            at(D::a51 * k1.x1 + D::a52 * k2.x1 + D::a53 * k3.x1 + D::a54 * k4.x1,
               D::a51 * k1.x2 + D::a52 * k2.x2 + D::a53 * k3.x2 + D::a54 * k4.x2));
        ReducedState k6 =
            rhs(tt + h, at(D::a61 * k1.x1 + D::a62 * k2.x1 + D::a63 * k3.x1 +
                               D::a64 * k4.x1 + D::a65 * k5.x1,
                           D::a61 * k1.x2 + D::a62 * k2.x2 + D::a63 * k3.x2 +
                               D::a64 * k4.x2 + D::a65 * k5.x2));
        ReducedState y5 = at(
            D::b1 * k1.x1 + D::b3 * k3.x1 + D::b4 * k4.x1 + D::b5 * k5.x1 + D::b6 * k6.x1,
            D::b1 * k1.x2 + D::b3 * k3.x2 + D::b4 * k4.x2 + D::b5 * k5.x2 + D::b6 * k6.x2);
        ReducedState k7 = rhs(tt + h, y5);
        const double err1 = h * ((D::b1 - D::e1) * k1.x1 + (D::b3 - D::e3) * k3.x1 +
                                 (D::b4 - D::e4) * k4.x1 + (D::b5 - D::e5) * k5.x1 +
                                 (D::b6 - D::e6) * k6.x1 - D::e7 * k7.x1);
        const double err2 = h * ((D::b1 - D::e1) * k1.x2 + (D::b3 - D::e3) * k3.x2 +
                                 (D::b4 - D::e4) * k4.x2 + (D::b5 - D::e5) * k5.x2 +
                                 (D::b6 - D::e6) * k6.x2 - D::e7 * k7.x2);
        const double sc1 = opt.tol + opt.tol * std::max(std::fabs(s.x1), std::fabs(y5.x1));
        const double sc2 = opt.tol + opt.tol * std::max(std::fabs(s.x2), std::fabs(y5.x2));
        const double err = std::sqrt(0.5 * ((err1 / sc1) * (err1 / sc1) +
                                            (err2 / sc2) * (err2 / sc2)));
        if (err <= 1.0) {
            t += h;
            s = y5;
            k1 = k7; // FSAL
            if (!(s.x1 > opt.x1_floor))
                throw std::runtime_error("propagate: x1 fell below the floor");
            out.push_back({t0 + t, s.x1, s.x2, u_of_t(t0 + std::min(t, duration))});
        }
        const double fac =
            std::clamp(0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.2), 0.2, 5.0);
        h *= fac;
        if (!(h > 0.0) || !std::isfinite(h))
            throw convergence_error("propagate: step size underflow");
    }
}

} // namespace detail

/// Integrate a piecewise-constant schedule from `start`. Segment boundaries
/// are hit exactly; every accepted step is recorded.
inline Trajectory propagate(const ReducedState& start, const BangBangSchedule& schedule,
                            const PropagateOptions& opt = {}) {
    if (!(start.x1 > 0.0)) throw std::domain_error("propagate: x1 must be positive");
    Trajectory out;
    ReducedState s = start;
    double t = 0.0;
    out.push_back({0.0, s.x1, s.x2,
                   schedule.segments.empty() ? schedule.jump_after : schedule.segments[0].u});
    for (const auto& seg : schedule.segments) {
        if (!(seg.u >= -1.0 && seg.u <= 1.0))
            throw std::domain_error("propagate: control value outside [-1,1]");
        detail::integrate_interval(s, t, seg.duration, [&](double) { return seg.u; }, opt,
                                   out);
        t += seg.duration;
    }
    return out;
}

/// Integrate an arbitrary (smooth) control u(t) over [0, duration].
inline Trajectory propagate_control(const ReducedState& start,
                                    const std::function<double(double)>& u_of_t,
                                    double duration, const PropagateOptions& opt = {}) {
    if (!(start.x1 > 0.0)) throw std::domain_error("propagate: x1 must be positive");
    Trajectory out;
    ReducedState s = start;
    out.push_back({0.0, s.x1, s.x2, u_of_t(0.0)});
    detail::integrate_interval(s, 0.0, duration, u_of_t, opt, out);
    return out;
}

inline ReducedState final_state(const Trajectory& traj) {
    return {traj.back().x1, traj.back().x2};
}

struct MultiswitchResult {
    BangBangSchedule schedule;
    double total_time;
    std::vector<double> switch_x1; // all switch loci, including the computed closing one
};

/// Build an X Y X Y ... Y schedule from (1,0) to (gamma,0) through the given
/// interior switch loci (x1 values, strictly increasing, even count). The
/// closing switch point is determined by the final-arc first integral. Arc
/// durations come from integrating dt = dx1/x2 along each arc's first
/// integral.
inline MultiswitchResult build_multiswitch(double gamma,
                                           const std::vector<double>& interior_switch_points) {
    if (!(gamma > 1.0)) throw std::domain_error("build_multiswitch: gamma must exceed 1");
    if (interior_switch_points.size() % 2 != 0)
        throw infeasible_error(
            "build_multiswitch: interior switch count must be even (X/Y arcs alternate)");

    const double c_target = gamma * gamma + 2.0 / gamma;

    // x2^2 as a function of x1 on an arc with integral constant c.
    auto x2sq_X = [](double c, double x1) { return c + x1 * x1 - 2.0 / x1; };
    auto x2sq_Y = [](double c, double x1) { return c - x1 * x1 - 2.0 / x1; };

    std::vector<double> pts = interior_switch_points;
    double prev = 1.0;
    for (double p : pts) {
        if (!(p > prev && p < gamma))
            throw infeasible_error("build_multiswitch: switch loci must be strictly "
                                   "increasing inside (1, gamma)");
        prev = p;
    }

    // Walk the arcs, tracking each arc's first-integral constant.
    std::vector<double> constants; // per arc
    double c = 1.0;                // X arc leaving (1,0)
    bool on_x = true;
    constants.push_back(c);
    double x = 1.0;
    for (double p : pts) {
        const double v2 = on_x ? x2sq_X(c, p) : x2sq_Y(c, p);
        if (!(v2 > 0.0))
            throw infeasible_error("build_multiswitch: x2 vanishes before reaching switch "
                                   "locus x1=" + std::to_string(p));
        // Y arcs must stay in x2 >= 0 all the way to the switch-out point;
        // x2^2 is monotone decreasing on Y, so checking the endpoint suffices.
        on_x = !on_x;
        c = on_x ? v2 - p * p + 2.0 / p : v2 + p * p + 2.0 / p;
        constants.push_back(c);
        x = p;
    }
    if (!on_x)
        throw infeasible_error("build_multiswitch: schedule must close on an X arc");

    // Closing switch: equal x2 on the current X arc and the final Y arc.
    const double s_sq = 0.5 * (c_target - c);
    if (!(s_sq > 0.0))
        throw infeasible_error("build_multiswitch: closing switch has no real solution");
    const double s_star = std::sqrt(s_sq);
    if (!(s_star > x && s_star < gamma))
        throw infeasible_error("build_multiswitch: closing switch locus " +
                               std::to_string(s_star) + " not inside (" +
                               std::to_string(x) + ", " + std::to_string(gamma) + ")");
    if (!(x2sq_X(c, s_star) > 0.0))
        throw infeasible_error("build_multiswitch: x2 vanishes on the closing X arc");
    constants.push_back(c_target);

    std::vector<double> loci = pts;
    loci.push_back(s_star);

    // Arc endpoints: 1, loci..., gamma.
    std::vector<double> nodes;
    nodes.push_back(1.0);
    for (double p : loci) nodes.push_back(p);
    nodes.push_back(gamma);

    MultiswitchResult res;
    res.switch_x1 = loci;
    res.schedule.jump_before = 1.0;
    res.schedule.jump_after = 1.0 / (gamma * gamma * gamma);

    // On an X arc x1 x2^2 = x1^3 + c x1 - 2 = (x1-r)(x1^2 + r x1 + r^2 + c)
    // with the turning point r at or below the arc; on a Y arc
    // x1 x2^2 = -(x1^3 - c x1 + 2) = (r-x1)(x1^2 + r x1 + r^2 - c) with r at
    // or above it. Substituting x1 = r +/- s^2 absorbs the simple root at r,
    // so the time integrand 2 sqrt(x1/(x1^2 + r x1 + r^2 -/+ c)) stays smooth
    // even when an arc ends arbitrarily close to its turning point.
    auto turn_X = [](double c, double p) {
        // largest root of x^3 + c x - 2 at or below p; f(p) >= 0 and f is
        // convex with f' > 0 down to the root, so Newton descends monotonically
        double x = p;
        for (int it = 0; it < 100; ++it) {
            const double f = x * x * x + c * x - 2.0;
            const double step = f / (3.0 * x * x + c);
            x -= step;
            if (std::fabs(step) < 1e-15 * std::fabs(x)) break;
        }
        return std::min(x, p);
    };
    auto turn_Y = [](double c) {
        // root of x^3 - c x + 2 bounding the arc from above; sqrt(c) lies
        // beyond it in the convex increasing region, so Newton descends
        double x = std::sqrt(c);
        for (int it = 0; it < 100; ++it) {
            const double f = x * x * x - c * x + 2.0;
            const double step = f / (3.0 * x * x - c);
            x -= step;
            if (std::fabs(step) < 1e-15 * std::fabs(x)) break;
        }
        return x;
    };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const bool arc_x = (i % 2 == 0);
        const double ci = constants[i];
        const double p = nodes[i], q = nodes[i + 1];
        double dt;
        if (arc_x) {
            const double r = (i == 0) ? 1.0 : turn_X(ci, p);
            auto f = [=](double s) {
                const double x1 = r + s * s;
                return 2.0 * std::sqrt(x1 / (x1 * x1 + r * x1 + r * r + ci));
            };
            dt = quadrature::integrate(f, std::sqrt(std::max(p - r, 0.0)),
                                       std::sqrt(q - r), 1e-10);
        } else {
            const double r = (i + 2 == nodes.size()) ? gamma : turn_Y(ci);
            auto f = [=](double s) {
                const double x1 = r - s * s;
                return 2.0 * std::sqrt(x1 / (x1 * x1 + r * x1 + r * r - ci));
            };
            dt = quadrature::integrate(f, std::sqrt(std::max(r - q, 0.0)),
                                       std::sqrt(r - p), 1e-10);
        }
        res.schedule.segments.push_back({arc_x ? -1.0 : 1.0, dt});
        total += dt;
    }
    res.total_time = total;
    return res;
}

} // namespace optexpand::dynamics

#endif
