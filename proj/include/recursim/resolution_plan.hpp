#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "recursim/cache.hpp"
#include "recursim/dns_model.hpp"

namespace recursim {

enum class Rcode : std::uint8_t { NoError, NxDomain, NoData, ServFail };

std::string_view to_string(Rcode rcode);

enum class StepKind : std::uint8_t { Referral, ChainLink, Final };

/// One external lookup: `qname` sent to a server of `zone`. `learned` is the
/// record the response carries (child NS for referrals, the CNAME for chain
/// links, the answer for final steps) and is absent for negative answers.
struct LookupStep {
    DomainName zone;
    DomainName qname;
    StepKind kind = StepKind::Final;
    std::optional<ResourceRecord> learned;

    bool operator==(const LookupStep&) const = default;
};

struct ResolutionPlan {
    std::vector<LookupStep> steps;
    /// Outcome delivered to the client once every step has completed.
    Rcode rcode = Rcode::NoError;
    std::optional<ResourceRecord> answer;
    /// TTL of the answering zone's NS set, as carried in the authority section.
    std::uint32_t authority_ns_ttl = 0;

    bool operator==(const ResolutionPlan&) const = default;
};

struct CachedAnswer {
    ResourceRecord answer;
    std::uint32_t authority_ns_ttl = 0;
};

using PlanResult = std::variant<ResolutionPlan, CachedAnswer>;

/// Lookups needed to answer (qname, rtype) at time `now` given what is
/// cached: one referral per zone cut below the deepest zone whose NS set is
/// known (the root is always known), one chain link per uncached CNAME hop,
/// then the final lookup. Throws std::logic_error when the namespace has no
/// root zone.
PlanResult resolution_plan(const Namespace& ns, const RecordCache& cache,
                           const DomainName& qname, RType rtype, SimTime now);

/// Expected service time of a cache-missing query once every zone's
/// positive-TTL NS set is cached: sum of mean latencies over the plan steps.
double expected_service_time(const Namespace& ns, const DomainName& qname, RType rtype);

}  // namespace recursim
