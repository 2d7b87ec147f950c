#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recursim/engine.hpp"
#include "recursim/probe.hpp"
#include "recursim/scenario.hpp"

namespace recursim {

/// Closed-form quota arithmetic for the scenario's own parameters.
struct AnalyticBlock {
    std::uint64_t recursive_clients = 0;
    std::uint64_t soft_quota = 0;
    double configured_timeout_s = 0.0;
    std::uint64_t per_client_memory_bytes = 0;
    std::uint64_t memory_bytes = 0;
    double saturating_query_rate_qps = 0.0;
    // Present when the scenario declares attack traffic.
    std::optional<double> attack_rate_qps;
    std::optional<double> effective_timeout_s;
    std::optional<double> min_service_time_s;
    std::optional<double> soft_effective_timeout_s;
};

AnalyticBlock analytic_block(const QuotaConfig& quota, std::optional<double> attack_rate_qps);

/// Counts restricted to queries that arrived at or after the warm-up.
struct WindowCounts {
    std::uint64_t injected = 0;
    std::uint64_t answered = 0;
    std::uint64_t servfail = 0;
    std::uint64_t dropped_early = 0;

    double rate(std::uint64_t part) const {
        return injected == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(injected);
    }
};

struct ProfileReport {
    std::string name;
    std::string kind;       // "attack" or "legit"
    std::string technique;  // empty for legit profiles
    double rate_qps = 0.0;
    OutcomeCounters counters;
    WindowCounts post_warmup;
    std::optional<double> service_time_median_s;
    std::optional<double> expected_service_time_s;
    std::optional<ProfileCheck> sufficiency;
};

struct DropAgeSummary {
    std::size_t count = 0;
    double min_s = 0.0;
    double median_s = 0.0;
    double p95_s = 0.0;
};

/// Nearest-rank quantile of `values` (copied and sorted), q in (0, 1].
double nearest_rank(std::vector<double> values, double q);
DropAgeSummary summarize_drop_ages(const std::vector<double>& ages);

struct RunReport {
    std::string scenario_digest;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    double sampling_interval_s = 0.0;
    double warmup_s = 0.0;
    AnalyticBlock analytic;
    bool simulated = false;
    std::vector<ProfileReport> profiles;
    OutcomeCounters total;
    std::vector<std::size_t> pending_series;
    DropAgeSummary drop_ages;
    std::vector<ProbeReport> probes;
    std::vector<std::string> warnings;
};

/// FNV-1a 64 over the canonical serialization, as "fnv1a64:<hex>".
std::string scenario_digest(const Scenario& scenario);

/// Builds workloads, runs the simulation and probe plans, and assembles the
/// report. Throws InvariantViolation if the engine detects a broken
/// invariant and ScenarioError for scenarios that cannot run.
RunReport run_scenario(const Scenario& scenario);

/// Runs only the probe plans whose zone equals `zone` (all plans when null).
std::vector<ProbeReport> run_probes(const Scenario& scenario, const DomainName* zone = nullptr);

enum class ReportFormat : std::uint8_t { Human, Machine };

std::string emit_report(const RunReport& report, ReportFormat format);

}  // namespace recursim
