#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "recursim/dns_model.hpp"
#include "recursim/engine.hpp"
#include "recursim/quota_math.hpp"
#include "recursim/rng.hpp"

namespace recursim {

enum class ArrivalProcess : std::uint8_t { Uniform, Poisson };

/// Fresh random label under `zone` for every query.
struct RandomQnameTechnique {
    static constexpr std::size_t kDefaultLabelLength = 12;
    std::size_t label_len = kDefaultLabelLength;
    DomainName zone;
    bool operator==(const RandomQnameTechnique&) const = default;
};

/// The same name every time; its authoritative record has TTL 0.
struct ZeroTtlTechnique {
    DomainName target;
    bool operator==(const ZeroTtlTechnique&) const = default;
};

/// Queries the head of a `chain_len`-link CNAME chain of zero-TTL records
/// synthesized in `zone`.
struct CnameChainTechnique {
    std::size_t chain_len = 1;
    DomainName zone;
    bool operator==(const CnameChainTechnique&) const = default;
};

/// Random names under `depth` nested zero-NS-TTL zones synthesized below
/// `zone`, one zone cut per label.
struct DeepLabelsTechnique {
    std::size_t depth = 1;
    DomainName zone;
    bool operator==(const DeepLabelsTechnique&) const = default;
};

/// Random names in a zone whose servers answer slowly.
struct SlowDomainTechnique {
    DomainName zone;
    bool operator==(const SlowDomainTechnique&) const = default;
};

using Technique = std::variant<RandomQnameTechnique, ZeroTtlTechnique, CnameChainTechnique,
                               DeepLabelsTechnique, SlowDomainTechnique>;

/// Zone a technique's queries are aimed at (for zero_ttl, the target's parent
/// chain is resolved against the namespace by the caller).
DomainName technique_zone(const Technique& technique);
std::string_view technique_name(const Technique& technique);

struct AttackProfile {
    std::string name;
    double rate_qps = 0.0;
    Technique technique;
    SimTime start_s = 0.0;
    SimTime end_s = 0.0;
    ArrivalProcess process = ArrivalProcess::Uniform;

    void validate() const;
    bool operator==(const AttackProfile&) const = default;
};

struct LegitProfile {
    std::string name;
    double rate_qps = 0.0;
    DomainName qname;
    SimTime start_s = 0.0;
    SimTime end_s = 0.0;
    ArrivalProcess process = ArrivalProcess::Uniform;

    void validate() const;
    bool operator==(const LegitProfile&) const = default;
};

struct ArrivalStream {
    std::vector<Arrival> arrivals;
    std::vector<std::string> warnings;
};

/// Uniform process: floor(rate * duration) arrivals at start + k / rate.
/// Poisson process: exponential gaps with mean 1 / rate inside the window.
ArrivalStream generate_arrivals(const AttackProfile& profile, ClientId client, Rng& rng);
ArrivalStream generate_arrivals(const LegitProfile& profile, ClientId client, Rng& rng);

/// Merges streams by time; ties keep the order of `streams`.
std::vector<Arrival> merge_streams(const std::vector<std::vector<Arrival>>& streams);

/// Adds whatever records or zones the technique relies on to `ns`. Throws
/// std::invalid_argument when the target zone is missing or conflicts.
void install_technique(const AttackProfile& profile, Namespace& ns);

/// A query name representative of the profile, for service-time estimates.
DomainName sample_qname(const AttackProfile& profile);

struct ProfileCheck {
    bool ok = false;
    double needed_service_time_s = 0.0;
};

/// The attack only pins recursions if each one lasts at least
/// min_service_time(L, Q).
ProfileCheck validate_profile_against_quota(const AttackProfile& profile, const QuotaConfig& quota,
                                            double expected_service_time_s);

}  // namespace recursim
