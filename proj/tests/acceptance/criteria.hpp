#pragma once

// Acceptance suite: one check per numbered criterion, shared by the
// acceptance binary and `modcup selftest`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace modcup::acceptance {

struct Outcome {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

struct SuiteConfig {
    std::uint64_t seed = 20261014;
    int threads = 0;
    std::string reference_path; // table reference file for criterion 1
};

/// Runs criterion `id` (1..9). Exceptions are reported as failures.
Outcome run_criterion(int id, const SuiteConfig& config);

/// Runs the selected criteria (all when `ids` is empty), calling `report`
/// after each one.
std::vector<Outcome> run_suite(const SuiteConfig& config, const std::vector<int>& ids,
                               const std::function<void(const Outcome&)>& report);

/// "CRITERION <id> PASS|FAIL <name>: <detail>"
std::string format_outcome(const Outcome& o);

} // namespace modcup::acceptance
