#ifndef SGF_ERRORS_HPP
#define SGF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sgf {

// Bad input to an operation (unknown address, mismatched levels, ...).
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A level or refinement request above the configured cap.
struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure (solver did not converge, degenerate cell, ...).
struct solver_error : std::runtime_error {
    solver_error(const std::string& msg, double best_value)
        : std::runtime_error(msg), best(best_value) {}
    double best;
};

inline constexpr int kDefaultMaxLevel = 12;

}  // namespace sgf

#endif
