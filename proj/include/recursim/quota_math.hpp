#pragma once

#include <cstdint>

namespace recursim {

/// Recursion quota and timeout knobs of a recursive server.
///
/// `recursive_clients` is the hard limit L on pending recursions,
/// `configured_timeout_s` the per-recursion timeout and
/// `per_client_memory_bytes` the memory U charged per pending recursion.
struct QuotaConfig {
    static constexpr std::uint64_t kDefaultRecursiveClients = 1000;
    static constexpr double kDefaultTimeoutS = 10.0;
    static constexpr double kMinBindTimeoutS = 10.0;
    static constexpr double kMaxBindTimeoutS = 30.0;
    static constexpr std::uint64_t kDefaultPerClientMemory = 20'000;

    std::uint64_t recursive_clients = kDefaultRecursiveClients;
    double configured_timeout_s = kDefaultTimeoutS;
    std::uint64_t per_client_memory_bytes = kDefaultPerClientMemory;

    /// Throws std::domain_error when a field is out of range. The timeout is
    /// only checked against [10, 30] when `bind_range` is set.
    void validate(bool bind_range = false) const;

    bool operator==(const QuotaConfig&) const = default;
};

struct MemoryEstimate {
    std::uint64_t total_bytes = 0;

    bool operator==(const MemoryEstimate&) const = default;
};

/// Pending count above which each admission drops an older recursion:
/// L - 100 when L > 1000, otherwise floor(0.9 * L).
std::uint64_t soft_quota(std::uint64_t recursive_clients);

/// Real timeout imposed on recursions by a sustained arrival rate: L / Q.
double effective_timeout(std::uint64_t recursive_clients, double query_rate_qps);

/// Arrival rate that pins the real timeout to `timeout_s`: L / T.
double saturating_query_rate(std::uint64_t recursive_clients, double timeout_s);

/// M = L * U. Throws std::overflow_error if the product leaves 64 bits.
MemoryEstimate memory_requirement(std::uint64_t recursive_clients,
                                  std::uint64_t per_client_memory_bytes);

/// Service time an attack query must reach to occupy a slot until it is
/// pushed out. Same value as effective_timeout().
double min_service_time(std::uint64_t recursive_clients, double attack_rate_qps);

}  // namespace recursim
