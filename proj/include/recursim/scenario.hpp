#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "recursim/dns_model.hpp"
#include "recursim/quota_math.hpp"
#include "recursim/workload.hpp"

namespace recursim {

struct ProbePlan {
    std::string name;
    DomainName zone;
    DomainName testing_name;
    double min_delay_s = 0.0;
    /// Defaults to recommended_trials(server count, 0.99) when absent.
    std::optional<std::size_t> n_trials;
    double client_link_s = 0.0;
    double jitter_s = 0.0;

    bool operator==(const ProbePlan&) const = default;
};

struct Scenario {
    static constexpr double kDefaultSamplingIntervalS = 0.1;

    std::uint64_t seed = 0;
    QuotaConfig quota;
    bool validate_bind_range = false;
    bool drop_on_reject = true;
    Namespace name_space;
    std::vector<AttackProfile> attack_profiles;
    std::vector<LegitProfile> legit_profiles;
    std::vector<ProbePlan> probe_plans;
    double horizon_s = 0.0;
    double sampling_interval_s = kDefaultSamplingIntervalS;
    std::optional<double> warmup_s;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioIssue {
    std::size_t line = 0;  // 0 when not tied to a line
    std::string message;
};

/// Every problem found in a scenario file, with line numbers.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<ScenarioIssue> issues);
    const std::vector<ScenarioIssue>& issues() const { return issues_; }

private:
    std::vector<ScenarioIssue> issues_;
};

/// Parses the sectioned key = value scenario format (see README). Throws
/// ScenarioError listing every problem found.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Parses a byte count with optional k/M/G (powers of ten) suffix.
std::uint64_t parse_byte_count(std::string_view text);

}  // namespace recursim
