#ifndef OPTEXPAND_ERRORS_HPP
#define OPTEXPAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optexpand {

// Quadrature or iteration failed to reach the requested tolerance.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested schedule or arc cannot be realized within the admissible region.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace optexpand

#endif
