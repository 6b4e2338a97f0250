#ifndef HETERO_VERIFY_HPP
#define HETERO_VERIFY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetero/cauchy.hpp"
#include "hetero/kernels.hpp"
#include "hetero/potentials.hpp"

namespace hetero {

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    double margin = 0.0;    // signed; positive = pass with slack
    double location = 0.0;  // t of the worst margin
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    std::string route;
    std::string kernel_name;
    std::string potential_name;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
    double energy_tol = 1e-8;
    double oracle_tol = 1e-8;       // 5e-3 is the variational-route default at call sites
    double bound_slack = 1e-9;
    double symmetry_tol = 1e-10;
    std::optional<std::function<double(double)>> oracle;  // closed form, when one exists
};

// Runs every applicable theorem-derived check; inapplicable checks are
// reported as skipped, never dropped. Deterministic for identical inputs.
VerificationReport run_all(const HeteroclinicProfile& profile, const PhiKernel& k,
                           const Potential& P, const VerifyOptions& options = {});

// Composite Simpson action over the sampled domain plus an analytic tail
// bound from the fitted decay constants.
double finite_action(const HeteroclinicProfile& profile, const PhiKernel& k,
                     const Potential& P);

nlohmann::json report_to_json(const VerificationReport& report);

}  // namespace hetero

#endif
