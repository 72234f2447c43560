#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stablets {

enum class Verdict { Pass, Fail, Info };

std::string_view to_string(Verdict verdict) noexcept;

struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Info;
    std::string detail;
};

struct VerificationOptions {
    std::uint64_t seed = 20251015;
    unsigned workers = 0;
    std::uint64_t horizon = 10000;
    std::uint64_t lil_replications = 1000;
    std::uint64_t sandwich_replications = 100;
};

/// Runs the inequality, proxy, closed-form and event checks. Info rows carry
/// frequencies that have no asserted threshold.
std::vector<CheckResult> verify_theory(const VerificationOptions& options = {});

bool all_passed(const std::vector<CheckResult>& checks) noexcept;

std::string verification_json(const std::vector<CheckResult>& checks);
std::string verification_text(const std::vector<CheckResult>& checks);

}  // namespace stablets
