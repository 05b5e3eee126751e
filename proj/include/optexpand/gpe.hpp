#ifndef OPTEXPAND_GPE_HPP
#define OPTEXPAND_GPE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "optexpand/errors.hpp"

namespace optexpand::gpe {

// 1D Gross-Pitaevskii evolution in trap units (hbar = m = omega0 = 1):
//   i dpsi/dt = [ -1/2 d^2/dx^2 + 1/2 u(t) x^2 + g |psi|^2 ] psi,
// integrated by second-order Strang splitting with spectral kinetic steps.
// u(t) = omega^2(t)/omega0^2 may be negative (expulsive potential).

struct Grid {
    std::size_t n = 0;
    double half_width = 0.0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> k; // FFT ordering
};

inline Grid make_grid(std::size_t n, double half_width) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::domain_error("make_grid: grid size must be a power of two >= 8");
    if (!(half_width > 0.0)) throw std::domain_error("make_grid: half_width must be positive");
    Grid g;
    g.n = n;
    g.half_width = half_width;
    g.dx = 2.0 * half_width / double(n);
    g.x.resize(n);
    g.k.resize(n);
    const double dk = std::numbers::pi / half_width;
    for (std::size_t i = 0; i < n; ++i) {
        g.x[i] = (double(i) - double(n) / 2.0) * g.dx;
        const double j = (i < n / 2) ? double(i) : double(i) - double(n);
        g.k[i] = j * dk;
    }
    return g;
}

struct CondensateField {
    Grid grid;
    std::vector<std::complex<double>> psi;
    double g = 0.0; // interaction strength
    double N = 1.0; // atom-number normalization
};

inline double chemical_potential(double omega, double g, double N) {
    if (!(omega > 0.0 && g > 0.0 && N > 0.0))
        throw std::domain_error("chemical_potential: omega, g, N must be positive");
    return std::cbrt(9.0 / 32.0 * omega * omega * g * g * N * N);
}

inline double tf_radius(double omega, double g, double N) {
    return std::sqrt(2.0 * chemical_potential(omega, g, N)) / omega;
}

struct ThomasFermiState {
    double mu = 0.0;
    double omega = 0.0;
    std::vector<double> profile; // Psi_omega(x) on the grid
};

/// Inverted-parabola ground-state profile at frequency omega.
inline ThomasFermiState thomas_fermi(double omega, double g, double N, const Grid& grid) {
    ThomasFermiState tf;
    tf.omega = omega;
    tf.mu = chemical_potential(omega, g, N);
    const double radius = std::sqrt(2.0 * tf.mu) / omega;
    if (radius >= grid.half_width)
        throw std::domain_error("thomas_fermi: grid half-width " +
                                std::to_string(grid.half_width) +
                                " does not cover the Thomas-Fermi radius " +
                                std::to_string(radius));
    tf.profile.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double dens = tf.mu - 0.5 * omega * omega * grid.x[i] * grid.x[i];
        tf.profile[i] = dens > 0.0 ? std::sqrt(dens / g) : 0.0;
    }
    return tf;
}

inline double norm(const CondensateField& f) {
    double s = 0.0;
    for (const auto& p : f.psi) s += std::norm(p);
    return s * f.grid.dx;
}

/// |<a|b>|^2 / (<a|a><b|b>), invariant under a global phase on either side.
inline double fidelity(const CondensateField& a, const CondensateField& b) {
    if (a.grid.n != b.grid.n || a.grid.dx != b.grid.dx)
        throw std::domain_error("fidelity: fields live on different grids");
    std::complex<double> overlap = 0.0;
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.psi.size(); ++i) {
        overlap += std::conj(a.psi[i]) * b.psi[i];
        na += std::norm(a.psi[i]);
        nb += std::norm(b.psi[i]);
    }
    return std::norm(overlap) / (na * nb);
}

namespace detail {

// In-place FFT pair on a complex buffer. Plans use FFTW_ESTIMATE so results
// are reproducible across runs.
class Fft {
public:
    Fft(std::complex<double>* data, std::size_t n)
        : n_(n),
          fwd_(fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(data),
                                reinterpret_cast<fftw_complex*>(data), FFTW_FORWARD,
                                FFTW_ESTIMATE)),
          bwd_(fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(data),
                                reinterpret_cast<fftw_complex*>(data), FFTW_BACKWARD,
                                FFTW_ESTIMATE)) {}
    ~Fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward() { fftw_execute(fwd_); }
    void backward(std::complex<double>* data) {
        fftw_execute(bwd_);
        const double inv = 1.0 / double(n_);
        for (std::size_t i = 0; i < n_; ++i) data[i] *= inv;
    }

private:
    std::size_t n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

} // namespace detail

struct PropagateGpeOptions {
    double norm_tol = 1e-8;  // allowed relative norm drift over the run
    double edge_tol = 1e-6;  // allowed |psi| at the boundary, relative to peak
    // Called after each accepted step that crosses a snapshot time.
    std::function<void(double t, const CondensateField&)> snapshot;
    std::vector<double> snapshot_times;
};

struct PropagateGpeReport {
    double norm_drift = 0.0;   // max relative drift seen
    double edge_max = 0.0;     // max boundary amplitude relative to peak
    std::size_t steps = 0;
};

/// Evolve the field under u(t) for `duration` with fixed step dt
/// (Strang splitting, u sampled at step midpoints). The field is updated in
/// place; norm and boundary monitors throw on violation.
inline PropagateGpeReport propagate_gpe(CondensateField& f,
                                        const std::function<double(double)>& u_of_t,
                                        double duration, double dt,
                                        const PropagateGpeOptions& opt = {}) {
    if (!(dt > 0.0)) throw std::domain_error("propagate_gpe: dt must be positive");
    if (duration < 0.0) throw std::domain_error("propagate_gpe: negative duration");
    const std::size_t n = f.grid.n;
    const std::size_t steps = duration > 0.0 ? std::size_t(std::ceil(duration / dt)) : 0;
    if (steps == 0) return {};
    dt = duration / double(steps);

    detail::Fft fft(f.psi.data(), n);
    std::vector<std::complex<double>> kin(n);
    for (std::size_t i = 0; i < n; ++i)
        kin[i] = std::exp(std::complex<double>(0.0, -0.5 * f.grid.k[i] * f.grid.k[i] * 0.5 * dt));

    const double norm0 = norm(f);
    PropagateGpeReport rep;
    std::size_t next_snap = 0;

    auto check = [&](double /*t*/) {
        const double drift = std::fabs(norm(f) / norm0 - 1.0);
        rep.norm_drift = std::max(rep.norm_drift, drift);
        if (drift > opt.norm_tol)
            throw std::runtime_error("propagate_gpe: norm drift " + std::to_string(drift) +
                                     " exceeds tolerance");
        double peak = 0.0;
        for (const auto& p : f.psi) peak = std::max(peak, std::abs(p));
        const double edge = std::max(std::abs(f.psi.front()), std::abs(f.psi.back())) / peak;
        rep.edge_max = std::max(rep.edge_max, edge);
        if (edge > opt.edge_tol)
            throw std::runtime_error(
                "propagate_gpe: boundary leak, |psi| at domain edge is " +
                std::to_string(edge) + " of peak; enlarge the domain");
    };

    double t = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double u = u_of_t(t + 0.5 * dt);
        fft.forward();
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= kin[i];
        fft.backward(f.psi.data());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = f.grid.x[i];
            const double phase = dt * (0.5 * u * x * x + f.g * std::norm(f.psi[i]));
            f.psi[i] *= std::exp(std::complex<double>(0.0, -phase));
        }
        fft.forward();
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= kin[i];
        fft.backward(f.psi.data());
        t += dt;
        ++rep.steps;
        if (s % 64 == 0 || s + 1 == steps) check(t);
        while (next_snap < opt.snapshot_times.size() &&
               t >= opt.snapshot_times[next_snap] - 0.5 * dt) {
            if (opt.snapshot) opt.snapshot(t, f);
            ++next_snap;
        }
    }
    return rep;
}

/// Imaginary-time relaxation toward the interacting ground state at control
/// value u, renormalizing to N after every step.
inline void imaginary_time_relax(CondensateField& f, double u, double dtau,
                                 std::size_t iterations) {
    if (!(dtau > 0.0)) throw std::domain_error("imaginary_time_relax: dtau must be positive");
    const std::size_t n = f.grid.n;
    detail::Fft fft(f.psi.data(), n);
    std::vector<double> kin(n);
    for (std::size_t i = 0; i < n; ++i)
        kin[i] = std::exp(-0.5 * f.grid.k[i] * f.grid.k[i] * 0.5 * dtau);
    for (std::size_t it = 0; it < iterations; ++it) {
        fft.forward();
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= kin[i];
        fft.backward(f.psi.data());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = f.grid.x[i];
            f.psi[i] *= std::exp(-dtau * (0.5 * u * x * x + f.g * std::norm(f.psi[i])));
        }
        fft.forward();
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= kin[i];
        fft.backward(f.psi.data());
        const double scale = std::sqrt(f.N / norm(f));
        for (auto& p : f.psi) p *= scale;
    }
}

struct InitialStateOptions {
    bool relax = true;      // imaginary-time refinement of the Thomas-Fermi profile
    double relax_dtau = 2e-3;
    std::size_t relax_iters = 2000;
};

/// Ground state at the initial trap (u = 1): Thomas-Fermi profile, optionally
/// relaxed by imaginary-time evolution.
inline CondensateField initial_state(const Grid& grid, double g, double N,
                                     const InitialStateOptions& opt = {}) {
    CondensateField f;
    f.grid = grid;
    f.g = g;
    f.N = N;
    const ThomasFermiState tf = thomas_fermi(1.0, g, N, grid);
    f.psi.assign(tf.profile.begin(), tf.profile.end());
    if (opt.relax) imaginary_time_relax(f, 1.0, opt.relax_dtau, opt.relax_iters);
    return f;
}

/// Max modulus deviation between psi and the scale-invariant image of the
/// initial field, b^{-1/2} |psi0(x/b)|, relative to the peak of |psi|.
inline double scaling_deviation(const CondensateField& f, const CondensateField& initial,
                                double b) {
    if (!(b > 0.0)) throw std::domain_error("scaling_deviation: b must be positive");
    const Grid& g = f.grid;
    double peak = 0.0;
    for (const auto& p : f.psi) peak = std::max(peak, std::abs(p));
    double dev = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xs = g.x[i] / b;
        double ref = 0.0;
        if (xs >= g.x.front() && xs <= g.x.back()) {
            const double pos = (xs - g.x.front()) / g.dx;
            const std::size_t j = std::min(std::size_t(pos), g.n - 2);
            const double w = pos - double(j);
            ref = (1.0 - w) * std::abs(initial.psi[j]) + w * std::abs(initial.psi[j + 1]);
        }
        dev = std::max(dev, std::fabs(std::abs(f.psi[i]) - ref / std::sqrt(b)));
    }
    return dev / peak;
}

struct AnsatzReport {
    std::vector<double> t;
    std::vector<double> deviation;
    double max_deviation = 0.0;
    double min_b = 0.0;
};

/// Compare a sequence of field snapshots against the scaling image of the
/// initial field; b_of_t must align with the snapshots.
inline AnsatzReport scaling_ansatz_check(const std::vector<std::pair<double, double>>& b_of_t,
                                         const std::vector<CondensateField>& history,
                                         const CondensateField& initial) {
    if (b_of_t.size() != history.size())
        throw std::domain_error("scaling_ansatz_check: time grids are not synchronized");
    AnsatzReport rep;
    rep.min_b = b_of_t.empty() ? 0.0 : b_of_t.front().second;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const double d = scaling_deviation(history[i], initial, b_of_t[i].second);
        rep.t.push_back(b_of_t[i].first);
        rep.deviation.push_back(d);
        rep.max_deviation = std::max(rep.max_deviation, d);
        rep.min_b = std::min(rep.min_b, b_of_t[i].second);
    }
    return rep;
}

} // namespace optexpand::gpe

#endif
