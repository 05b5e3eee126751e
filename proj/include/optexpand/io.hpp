#ifndef OPTEXPAND_IO_HPP
#define OPTEXPAND_IO_HPP

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optexpand/dynamics.hpp"
#include "optexpand/gpe.hpp"
#include "optexpand/synthesis.hpp"

namespace optexpand::io {

// Round-trip decimal formatting so CSV values re-read bit exact.
inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << v;
    return os.str();
}

inline void write_trajectory_csv(std::ostream& os, const dynamics::Trajectory& traj) {
    os << "t,x1,x2,u\n"; // scaled time t = omega0 * t_old
    for (const auto& p : traj)
        os << fmt(p.t) << ',' << fmt(p.x1) << ',' << fmt(p.x2) << ',' << fmt(p.u) << '\n';
}

inline void write_control_csv(std::ostream& os,
                              const std::vector<std::pair<double, double>>& samples,
                              const std::vector<double>& b_samples) {
    os << "t,b,u\n"; // scaled time t = omega0 * t_old
    for (std::size_t i = 0; i < samples.size(); ++i)
        os << fmt(samples[i].first) << ',' << fmt(b_samples[i]) << ','
           << fmt(samples[i].second) << '\n';
}

inline void write_field_csv(std::ostream& os, const gpe::CondensateField& f) {
    os << "x,re_psi,im_psi,density\n";
    for (std::size_t i = 0; i < f.grid.n; ++i)
        os << fmt(f.grid.x[i]) << ',' << fmt(f.psi[i].real()) << ',' << fmt(f.psi[i].imag())
           << ',' << fmt(std::norm(f.psi[i])) << '\n';
}

inline nlohmann::json to_json(const synthesis::EllipticChainConstants& k) {
    return {{"a", k.a},           {"b", k.b},           {"B1", k.B1},
            {"B2", k.B2},         {"p2", k.p2},         {"q2", k.q2},
            {"m", k.m},           {"n", k.n},           {"c", k.c},
            {"d", k.d},           {"y_upper", k.y_upper}, {"z_upper", k.z_upper},
            {"w_upper", k.w_upper}, {"epsilon", k.epsilon}, {"zeta", k.zeta},
            {"mu", k.mu},         {"nu", k.nu},         {"x_upper", k.x_upper}};
}

inline nlohmann::json to_json(const synthesis::SynthesisResult& r) {
    nlohmann::json j{{"gamma", r.gamma},
                     {"beta", r.beta},
                     {"x2_at_switch", r.x2_at_switch},
                     {"T1", r.T1},
                     {"T2", r.T2},
                     {"T", r.T},
                     {"time_unit", "scaled, t = omega0 * t_old"},
                     {"method", r.method == synthesis::Method::closed_form ? "closed_form"
                                                                           : "quadrature"}};
    if (r.method == synthesis::Method::closed_form && r.gamma > 1.0)
        j["chain_constants"] = to_json(r.chain);
    return j;
}

} // namespace optexpand::io

#endif
