#pragma once

#include <stdexcept>
#include <string>

namespace psb {

// Error taxonomy mirrored by the CLI exit codes:
//   domain_error   -> 2   (invalid parameters, inadmissible ranges)
//   resource_error -> 3   (memory/size budgets exceeded)
//   internal_error -> 4   (consistency guard tripped: precision, invariants)
// CLI usage errors map to 64 in the driver.

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum exit_code : int {
    exit_ok = 0,
    exit_domain = 2,
    exit_resource = 3,
    exit_internal = 4,
    exit_usage = 64,
};

} // namespace psb
