#ifndef HETERO_COMMON_HPP
#define HETERO_COMMON_HPP

#include <stdexcept>
#include <string>

namespace hetero {

// Kernel or potential evaluated outside its admissible domain, or a
// non-finite value showed up mid-computation.
struct evaluation_error : std::runtime_error {
    explicit evaluation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural hypothesis on the kernel or potential failed at a sample point.
struct hypothesis_error : std::runtime_error {
    explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bracket expansion for a monotone inverse ran past the overflow guard.
struct unbounded_inverse_error : std::runtime_error {
    explicit unbounded_inverse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad construction parameters (kernel/potential builders, configs).
struct construction_error : std::runtime_error {
    explicit construction_error(const std::string& msg) : std::runtime_error(msg) {}
};

// ODE solver failures: stationary start, step underflow, step cap.
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Descent stalled before reaching the gradient tolerance.
struct descent_error : std::runtime_error {
    explicit descent_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Decay fit or translation normalization could not be performed.
struct fit_error : std::runtime_error {
    explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hetero

#endif
