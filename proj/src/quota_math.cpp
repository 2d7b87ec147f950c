#include "recursim/quota_math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace recursim {

void QuotaConfig::validate(bool bind_range) const {
    if (recursive_clients < 1) {
        throw std::domain_error("recursive_clients must be >= 1");
    }
    if (!(configured_timeout_s > 0.0) || !std::isfinite(configured_timeout_s)) {
        throw std::domain_error("timeout_s must be a positive number");
    }
    if (bind_range &&
        (configured_timeout_s < kMinBindTimeoutS || configured_timeout_s > kMaxBindTimeoutS)) {
        throw std::domain_error("timeout_s " + std::to_string(configured_timeout_s) +
                                " outside [10, 30]");
    }
    if (per_client_memory_bytes < 1) {
        throw std::domain_error("per_client_memory must be >= 1");
    }
}

std::uint64_t soft_quota(std::uint64_t recursive_clients) {
    if (recursive_clients == 0) {
        throw std::domain_error("soft_quota: recursive_clients must be >= 1");
    }
    if (recursive_clients > 1000) {
        return recursive_clients - 100;
    }
    return recursive_clients * 9 / 10;
}

double effective_timeout(std::uint64_t recursive_clients, double query_rate_qps) {
    if (recursive_clients == 0) {
        throw std::domain_error("effective_timeout: recursive_clients must be >= 1");
    }
    if (!(query_rate_qps > 0.0)) {
        throw std::domain_error("effective_timeout: query rate must be positive");
    }
    return static_cast<double>(recursive_clients) / query_rate_qps;
}

double saturating_query_rate(std::uint64_t recursive_clients, double timeout_s) {
    if (!(timeout_s > 0.0)) {
        throw std::domain_error("saturating_query_rate: timeout must be positive");
    }
    return static_cast<double>(recursive_clients) / timeout_s;
}

MemoryEstimate memory_requirement(std::uint64_t recursive_clients,
                                  std::uint64_t per_client_memory_bytes) {
    if (recursive_clients == 0 || per_client_memory_bytes == 0) {
        throw std::domain_error("memory_requirement: arguments must be positive");
    }
    if (per_client_memory_bytes > std::numeric_limits<std::uint64_t>::max() / recursive_clients) {
        throw std::overflow_error("memory_requirement: product exceeds 64 bits");
    }
    return MemoryEstimate{recursive_clients * per_client_memory_bytes};
}

double min_service_time(std::uint64_t recursive_clients, double attack_rate_qps) {
    return effective_timeout(recursive_clients, attack_rate_qps);
}

}  // namespace recursim
