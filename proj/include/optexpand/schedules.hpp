#ifndef OPTEXPAND_SCHEDULES_HPP
#define OPTEXPAND_SCHEDULES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "optexpand/errors.hpp"

namespace optexpand::schedules {

// Reference shortcut schedules: smooth scale functions b(s), s = t/T, that
// satisfy b(0)=1, b(T)=gamma with vanishing first and second derivatives at
// both ends. The control they imply follows from the scale-factor equation:
//   u(t) = 1/b^3 - b''(t)/b,   derivatives in scaled time.

enum class ScheduleKind { polynomial, exponential_polynomial, user_tabulated };

struct ScaleEval {
    double b;
    double db;  // d b / ds
    double d2b; // d^2 b / ds^2
};

namespace detail {
// Smoothstep exponent polynomial 6s^5 - 15s^4 + 10s^3 and derivatives.
inline void smooth_poly(double s, double& f, double& df, double& d2f) {
    f = ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
    df = 30.0 * s * s * (s - 1.0) * (s - 1.0);
    d2f = 60.0 * s * (s - 1.0) * (2.0 * s - 1.0);
}

inline void check_s(double s, const char* who) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error(std::string(who) + ": s must lie in [0,1], got " +
                                std::to_string(s));
}
} // namespace detail

/// b_p(s) = (gamma-1)(6s^5-15s^4+10s^3) + 1.
inline ScaleEval eval_polynomial(double s, double gamma) {
    detail::check_s(s, "eval_polynomial");
    if (!(gamma > 1.0)) throw std::domain_error("eval_polynomial: gamma must exceed 1");
    double f, df, d2f;
    detail::smooth_poly(s, f, df, d2f);
    return {(gamma - 1.0) * f + 1.0, (gamma - 1.0) * df, (gamma - 1.0) * d2f};
}

/// b_e(s) = gamma^(6s^5-15s^4+10s^3).
inline ScaleEval eval_exponential(double s, double gamma) {
    detail::check_s(s, "eval_exponential");
    if (!(gamma > 1.0)) throw std::domain_error("eval_exponential: gamma must exceed 1");
    double f, df, d2f;
    detail::smooth_poly(s, f, df, d2f);
    const double lg = std::log(gamma);
    const double b = std::exp(lg * f);
    return {b, lg * df * b, (lg * d2f + lg * lg * df * df) * b};
}

struct ScaleSchedule {
    ScheduleKind kind;
    double gamma;
    double duration; // in scaled time t
    std::function<ScaleEval(double)> tabulated; // used only for user_tabulated

    ScaleEval eval(double s) const {
        switch (kind) {
            case ScheduleKind::polynomial: return eval_polynomial(s, gamma);
            case ScheduleKind::exponential_polynomial: return eval_exponential(s, gamma);
            case ScheduleKind::user_tabulated: return tabulated(s);
        }
        throw std::logic_error("ScaleSchedule: bad kind");
    }
};

inline ScaleSchedule make_schedule(ScheduleKind kind, double gamma, double duration) {
    if (!(gamma > 1.0)) throw std::domain_error("make_schedule: gamma must exceed 1");
    if (!(duration > 0.0)) throw std::domain_error("make_schedule: duration must be positive");
    return {kind, gamma, duration, {}};
}

/// Validate a user-supplied evaluator: boundary conditions and b' >= 0
/// (monotone expansion; retrograde motion is rejected).
inline ScaleSchedule make_tabulated(std::function<ScaleEval(double)> eval, double gamma,
                                    double duration, std::size_t check_points = 1024) {
    ScaleSchedule sched{ScheduleKind::user_tabulated, gamma, duration, std::move(eval)};
    const ScaleEval b0 = sched.eval(0.0), b1 = sched.eval(1.0);
    if (std::fabs(b0.b - 1.0) > 1e-9 || std::fabs(b1.b - gamma) > 1e-9 ||
        std::fabs(b0.db) > 1e-9 || std::fabs(b1.db) > 1e-9)
        throw infeasible_error("make_tabulated: boundary conditions b(0)=1, b(1)=gamma, "
                               "b'(0)=b'(1)=0 violated");
    for (std::size_t i = 0; i <= check_points; ++i) {
        const double s = double(i) / double(check_points);
        const ScaleEval e = sched.eval(s);
        if (e.db < -1e-12)
            throw infeasible_error("make_tabulated: b'(s) < 0 at s=" + std::to_string(s) +
                                   "; contracting schedules are not admissible");
        if (!(e.b > 0.0)) throw infeasible_error("make_tabulated: b(s) <= 0");
    }
    return sched;
}

/// The control implied by the schedule at scaled time t in [0, duration].
inline double control_at(const ScaleSchedule& sched, double t) {
    const double T = sched.duration;
    const ScaleEval e = sched.eval(t / T);
    if (!(e.b > 0.0)) throw std::domain_error("control_at: b(t) <= 0");
    const double b2dot = e.d2b / (T * T); // second derivative in scaled time
    return 1.0 / (e.b * e.b * e.b) - b2dot / e.b;
}

/// Uniform samples (t, u(t)), endpoints included.
inline std::vector<std::pair<double, double>> reconstruct_control(const ScaleSchedule& sched,
                                                                  std::size_t n_samples = 4096) {
    if (n_samples < 2) throw std::domain_error("reconstruct_control: need >= 2 samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i) {
        const double t = sched.duration * double(i) / double(n_samples);
        out.emplace_back(t, control_at(sched, t));
    }
    return out;
}

struct FeasibilityScan {
    double max_abs_u;
    double argmax_t;          // global argmax of |u|
    double interior_max_abs_u;
    double interior_argmax_t; // binding time away from the endpoints
};

inline FeasibilityScan scan_control(const ScaleSchedule& sched, std::size_t n_samples) {
    FeasibilityScan scan{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i <= n_samples; ++i) {
        const double t = sched.duration * double(i) / double(n_samples);
        const double au = std::fabs(control_at(sched, t));
        if (au > scan.max_abs_u) {
            scan.max_abs_u = au;
            scan.argmax_t = t;
        }
        if (i > 0 && i < n_samples && au > scan.interior_max_abs_u) {
            scan.interior_max_abs_u = au;
            scan.interior_argmax_t = t;
        }
    }
    return scan;
}

struct MinimalDurationResult {
    double duration;
    FeasibilityScan scan; // at the returned duration
};

/// Smallest duration for which the reconstructed control respects |u| <= bound,
/// by bisection. The feasibility grid is refined until doubling it moves the
/// answer by less than 1e-6 relative.
inline MinimalDurationResult minimal_feasible_duration(ScheduleKind kind, double gamma,
                                                       double bound = 1.0,
                                                       double duration_cap = 1e6) {
    if (!(gamma > 1.0))
        throw std::domain_error("minimal_feasible_duration: gamma must exceed 1");
    if (!(bound > 0.0))
        throw std::domain_error("minimal_feasible_duration: bound must be positive");

    auto solve_on_grid = [&](std::size_t n) {
        auto feasible = [&](double T) {
            const ScaleSchedule s = make_schedule(kind, gamma, T);
            return scan_control(s, n).max_abs_u <= bound * (1.0 + 1e-12);
        };
        double hi = 1.0;
        while (!feasible(hi)) {
            hi *= 2.0;
            if (hi > duration_cap)
                throw infeasible_error("minimal_feasible_duration: no feasible duration "
                                       "below the cap; bound too tight");
        }
        double lo = hi;
        while (lo > 1e-12 && feasible(lo * 0.5)) lo *= 0.5; // may land feasible already
        lo *= 0.5;
        // invariant: lo infeasible (or ~0), hi feasible
        for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? hi : lo) = mid;
        }
        return hi;
    };

    std::size_t n = 4096;
    double T = solve_on_grid(n);
    for (int refine = 0; refine < 6; ++refine) {
        const double T2 = solve_on_grid(2 * n);
        const double rel = std::fabs(T2 - T) / T2;
        T = T2;
        n *= 2;
        if (rel < 1e-6) break;
        if (refine == 5)
            throw convergence_error("minimal_feasible_duration: feasibility grid did not "
                                    "converge");
    }
    const ScaleSchedule s = make_schedule(kind, gamma, T);
    return {T, scan_control(s, n)};
}

} // namespace optexpand::schedules

#endif
