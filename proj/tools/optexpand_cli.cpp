// Command-line front end: time-optimal trap-expansion synthesis, sweeps,
// reference-schedule comparison, and Gross-Pitaevskii validation.
//
// Exit codes: 0 success, 2 domain/infeasibility error, 3 convergence failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "optexpand/dynamics.hpp"
#include "optexpand/errors.hpp"
#include "optexpand/gpe.hpp"
#include "optexpand/io.hpp"
#include "optexpand/schedules.hpp"
#include "optexpand/synthesis.hpp"

namespace ox = optexpand;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file " + out_path);
        os << j.dump(2) << '\n';
    }
}

template <class Writer>
void emit_csv(const std::string& out_path, Writer&& w) {
    if (out_path.empty()) {
        w(std::cout);
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file " + out_path);
        w(os);
    }
}

int run_solve(double gamma, const std::string& trajectory_path, double tol,
              const std::string& out_path) {
    const ox::synthesis::SolveOutput sol = ox::synthesis::solve(gamma);
    json j = ox::io::to_json(sol.result);
    if (gamma > 1.0) {
        const auto traj = ox::dynamics::propagate({1.0, 0.0}, sol.schedule, {tol});
        const auto end = ox::dynamics::final_state(traj);
        j["endpoint"] = {{"x1", end.x1}, {"x2", end.x2}};
        j["endpoint_error"] =
            std::max(std::fabs(end.x1 - gamma), std::fabs(end.x2));
        j["boundary_jumps"] = {{"u_before", sol.schedule.jump_before},
                               {"u_after", sol.schedule.jump_after}};
        if (!trajectory_path.empty())
            emit_csv(trajectory_path,
                     [&](std::ostream& os) { ox::io::write_trajectory_csv(os, traj); });
    }
    emit(j, out_path);
    return 0;
}

int run_sweep(double gmin, double gmax, int steps, bool log_spaced,
              const std::string& out_path) {
    if (!(gmin >= 1.0) || !(gmax >= gmin))
        throw std::domain_error("sweep: need 1 <= gamma-min <= gamma-max");
    if (steps < 1) throw std::domain_error("sweep: steps must be >= 1");
    std::vector<double> gammas;
    for (int i = 0; i < steps; ++i) {
        const double f = steps == 1 ? 0.0 : double(i) / double(steps - 1);
        gammas.push_back(log_spaced ? gmin * std::pow(gmax / gmin, f)
                                    : gmin + f * (gmax - gmin));
    }
    emit_csv(out_path, [&](std::ostream& os) {
        os << "gamma,beta,T1,T2,T,T_asymptotic\n"; // scaled time t = omega0 * t_old
        for (double g : gammas) {
            const auto r = ox::synthesis::solve(g).result;
            const double ta = g > 1.0 ? ox::synthesis::asymptotic_time(g)
                                      : std::numbers::pi / 4.0;
            os << ox::io::fmt(g) << ',' << ox::io::fmt(r.beta) << ',' << ox::io::fmt(r.T1)
               << ',' << ox::io::fmt(r.T2) << ',' << ox::io::fmt(r.T) << ','
               << ox::io::fmt(ta) << '\n';
        }
    });
    return 0;
}

int run_compare(double gamma, double bound, const std::string& out_path) {
    const double t_opt = ox::synthesis::solve(gamma).result.T;
    json j{{"gamma", gamma},
           {"optimal_T", t_opt},
           {"control_bound", bound},
           {"time_unit", "scaled, t = omega0 * t_old"}};
    const double u0 = 1.0, uT = 1.0 / (gamma * gamma * gamma);
    for (auto [kind, name] :
         {std::pair{ox::schedules::ScheduleKind::polynomial, "polynomial"},
          std::pair{ox::schedules::ScheduleKind::exponential_polynomial,
                    "exponential_polynomial"}}) {
        if (gamma == 1.0) {
            j["reference"][name] = {{"minimal_feasible_duration", 0.0}};
            continue;
        }
        const auto res = ox::schedules::minimal_feasible_duration(kind, gamma, bound);
        const auto sched = ox::schedules::make_schedule(kind, gamma, res.duration);
        j["reference"][name] = {
            {"minimal_feasible_duration", res.duration},
            {"slowdown_vs_optimal", res.duration / t_opt},
            {"max_abs_u", res.scan.max_abs_u},
            {"binding_time", res.scan.interior_argmax_t},
            {"u_start", ox::schedules::control_at(sched, 0.0)},
            {"u_end", ox::schedules::control_at(sched, res.duration)},
            {"u_start_expected", u0},
            {"u_end_expected", uT}};
    }
    emit(j, out_path);
    return 0;
}

int run_validate(double gamma, std::size_t grid_n, double gtilde, double dt,
                 double domain_factor, bool no_relax, bool stationary, double fidelity_target,
                 const std::string& out_path, const std::string& field_path) {
    const double N = 1.0;
    json j{{"gamma", gamma}, {"grid", grid_n}, {"gtilde", gtilde}, {"dt", dt},
           {"time_unit", "scaled, t = omega0 * t_old"}};

    const double half_width = domain_factor * gamma * ox::gpe::tf_radius(1.0, gtilde, N);
    const auto grid = ox::gpe::make_grid(grid_n, half_width);
    ox::gpe::InitialStateOptions iopt;
    iopt.relax = !no_relax;
    auto psi0 = ox::gpe::initial_state(grid, gtilde, N, iopt);
    j["tf_validity_ratio"] = ox::gpe::chemical_potential(1.0, gtilde, N);

    if (stationary) {
        auto f = psi0;
        const double duration = 3.0 * 2.0 * std::numbers::pi;
        const auto rep = ox::gpe::propagate_gpe(f, [](double) { return 1.0; }, duration, dt);
        j["mode"] = "stationary";
        j["duration"] = duration;
        j["fidelity_vs_initial"] = ox::gpe::fidelity(psi0, f);
        j["norm_drift"] = rep.norm_drift;
        j["edge_max"] = rep.edge_max;
        emit(j, out_path);
        return 0;
    }

    const auto sol = ox::synthesis::solve(gamma);
    const double T = sol.result.T;
    const double T1 = sol.result.T1;
    auto u_of_t = [&](double t) { return t < T1 ? -1.0 : 1.0; };

    // b(t) from the reduced dynamics, for the scaling-ansatz deviation curve.
    const auto traj = ox::dynamics::propagate({1.0, 0.0}, sol.schedule, {1e-10});
    auto b_at = [&](double t) {
        auto it = std::lower_bound(traj.begin(), traj.end(), t,
                                   [](const auto& p, double tt) { return p.t < tt; });
        if (it == traj.begin()) return it->x1;
        if (it == traj.end()) return traj.back().x1;
        const auto& p1 = *it;
        const auto& p0 = *std::prev(it);
        const double w = (t - p0.t) / (p1.t - p0.t);
        return (1.0 - w) * p0.x1 + w * p1.x1;
    };

    std::vector<std::pair<double, double>> b_of_t;
    std::vector<ox::gpe::CondensateField> history;
    ox::gpe::PropagateGpeOptions popt;
    for (int i = 1; i <= 8; ++i) popt.snapshot_times.push_back(T * double(i) / 8.0);
    popt.snapshot = [&](double t, const ox::gpe::CondensateField& f) {
        b_of_t.emplace_back(t, b_at(t));
        history.push_back(f);
    };

    auto f = psi0;
    const auto rep = ox::gpe::propagate_gpe(f, u_of_t, T, dt, popt);
    const double omega_T = std::pow(gamma, -1.5);
    const auto tf_target = ox::gpe::thomas_fermi(omega_T, gtilde, N, grid);
    ox::gpe::CondensateField target{grid, {}, gtilde, N};
    target.psi.assign(tf_target.profile.begin(), tf_target.profile.end());

    const double fid = ox::gpe::fidelity(target, f);
    const auto ansatz = ox::gpe::scaling_ansatz_check(b_of_t, history, psi0);
    j["mode"] = "expansion";
    j["T"] = T;
    j["fidelity_vs_target"] = fid;
    j["fidelity_target"] = fidelity_target;
    j["fidelity_pass"] = fid >= fidelity_target;
    j["norm_drift"] = rep.norm_drift;
    j["edge_max"] = rep.edge_max;
    j["scaling_deviation"] = {{"t", ansatz.t},
                              {"deviation", ansatz.deviation},
                              {"max", ansatz.max_deviation}};
    j["min_b"] = 1.0; // b(t) >= 1 along the expansion
    if (!field_path.empty())
        emit_csv(field_path, [&](std::ostream& os) { ox::io::write_field_csv(os, f); });
    emit(j, out_path);
    return fid >= fidelity_target ? 0 : 3;
}

int run_multiswitch(double gamma, const std::vector<double>& switches,
                    const std::string& out_path) {
    const auto res = ox::dynamics::build_multiswitch(gamma, switches);
    const double t_opt = ox::synthesis::solve(gamma).result.T;
    json segs = json::array();
    for (const auto& s : res.schedule.segments)
        segs.push_back({{"u", s.u}, {"duration", s.duration}});
    emit(json{{"gamma", gamma},
              {"switch_x1", res.switch_x1},
              {"segments", segs},
              {"total_time", res.total_time},
              {"optimal_T", t_opt},
              {"excess_over_optimal", res.total_time - t_opt},
              {"time_unit", "scaled, t = omega0 * t_old"}},
         out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal bang-bang trap-frequency schedules for 1D condensate "
                 "expansion"};
    app.set_config("--config", "", "flat key=value config file")
        ->envname("OPTEXPAND_CONFIG");
    app.require_subcommand(1);

    double gamma = 2.0, tol = 1e-10, gmin = 1.0, gmax = 10.0, bound = 1.0;
    double gtilde = 235.0, dt = 5e-4, domain_factor = 4.0, fidelity_target = 0.99;
    int steps = 10;
    std::size_t grid_n = 2048;
    bool log_spaced = false, no_relax = false, stationary = false;
    std::string out_path, trajectory_path, field_path;
    std::vector<double> switches;

    auto* solve = app.add_subcommand("solve", "optimal schedule for one expansion factor");
    solve->add_option("--gamma", gamma, "expansion factor, >= 1")->required();
    solve->add_option("--tol", tol, "propagation tolerance");
    solve->add_option("--emit-trajectory", trajectory_path, "write trajectory CSV here");
    solve->add_option("--out", out_path, "report path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "CSV sweep of T(gamma)");
    sweep->add_option("--gamma-min", gmin)->required();
    sweep->add_option("--gamma-max", gmax)->required();
    sweep->add_option("--steps", steps)->required();
    sweep->add_flag("--log", log_spaced, "log-spaced gammas");
    sweep->add_option("--out", out_path, "CSV path (default stdout)");

    auto* compare = app.add_subcommand("compare",
                                       "optimal T vs reference shortcut schedules");
    compare->add_option("--gamma", gamma)->required();
    compare->add_option("--bound", bound, "control bound (default 1)");
    compare->add_option("--out", out_path);

    auto* validate = app.add_subcommand("validate", "Gross-Pitaevskii validation run");
    validate->add_option("--gamma", gamma)->required();
    validate->add_option("--grid", grid_n, "grid points (power of two)");
    validate->add_option("--gtilde", gtilde, "interaction strength");
    validate->add_option("--dt", dt, "time step");
    validate->add_option("--domain-factor", domain_factor,
                         "half-width in units of the final Thomas-Fermi radius");
    validate->add_option("--fidelity-target", fidelity_target);
    validate->add_flag("--no-relax", no_relax, "start from the raw Thomas-Fermi profile");
    validate->add_flag("--stationary", stationary, "hold u = 1 instead of expanding");
    validate->add_option("--emit-field", field_path, "write final field CSV here");
    validate->add_option("--out", out_path);

    auto* multi = app.add_subcommand("multiswitch", "time of a multi-switch alternative");
    multi->add_option("--gamma", gamma)->required();
    multi->add_option("--switches", switches,
                      "interior switch loci in x1 (even count, increasing)")
        ->delimiter(',');
    multi->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(gamma, trajectory_path, tol, out_path);
        if (sweep->parsed()) return run_sweep(gmin, gmax, steps, log_spaced, out_path);
        if (compare->parsed()) return run_compare(gamma, bound, out_path);
        if (validate->parsed())
            return run_validate(gamma, grid_n, gtilde, dt, domain_factor, no_relax,
                                stationary, fidelity_target, out_path, field_path);
        if (multi->parsed()) return run_multiswitch(gamma, switches, out_path);
    } catch (const ox::convergence_error& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return 3;
    } catch (const ox::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
