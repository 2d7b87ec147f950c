#include "recursim/resolution_plan.hpp"

#include <set>
#include <stdexcept>

namespace recursim {

namespace {

constexpr int kMaxChainHops = 64;

}  // namespace

std::string_view to_string(Rcode rcode) {
    switch (rcode) {
        case Rcode::NoError: return "NOERROR";
        case Rcode::NxDomain: return "NXDOMAIN";
        case Rcode::NoData: return "NODATA";
        case Rcode::ServFail: return "SERVFAIL";
    }
    return "?";
}

PlanResult resolution_plan(const Namespace& ns, const RecordCache& cache,
                           const DomainName& qname, RType rtype, SimTime now) {
    if (!ns.has_root()) {
        throw std::logic_error("resolution_plan: namespace has no root zone");
    }
    ResolutionPlan plan;
    std::set<DomainName> planned_ns;
    DomainName name = qname;

    for (int hop = 0; hop < kMaxChainHops; ++hop) {
        const AuthZone* zone = ns.covering_zone(name);
        if (const CacheEntry* hit = cache.peek(name, rtype, now)) {
            if (plan.steps.empty()) {
                return CachedAnswer{hit->record, zone->ns_ttl()};
            }
            plan.rcode = Rcode::NoError;
            plan.answer = hit->record;
            plan.authority_ns_ttl = zone->ns_ttl();
            return plan;
        }
        if (rtype != RType::CNAME) {
            if (const CacheEntry* alias = cache.peek(name, RType::CNAME, now)) {
                name = *alias->record.target();
                continue;
            }
        }

        const auto path = ns.delegation_path(zone->origin());
        std::size_t known = 0;
        for (std::size_t i = path.size(); i-- > 1;) {
            const DomainName& origin = path[i]->origin();
            if (planned_ns.contains(origin) || cache.peek(origin, RType::NS, now)) {
                known = i;
                break;
            }
        }
        for (std::size_t i = known + 1; i < path.size(); ++i) {
            plan.steps.push_back(LookupStep{path[i - 1]->origin(), name, StepKind::Referral,
                                            path[i]->ns_record()});
            planned_ns.insert(path[i]->origin());
        }

        if (rtype != RType::CNAME) {
            if (const ResourceRecord* alias = zone->find(name, RType::CNAME)) {
                plan.steps.push_back(LookupStep{zone->origin(), name, StepKind::ChainLink, *alias});
                name = *alias->target();
                continue;
            }
        }

        LookupStep last{zone->origin(), name, StepKind::Final, std::nullopt};
        plan.authority_ns_ttl = zone->ns_ttl();
        if (const ResourceRecord* rec = zone->find(name, rtype)) {
            last.learned = *rec;
            plan.rcode = Rcode::NoError;
            plan.answer = *rec;
        } else {
            bool exists = false;
            for (const auto& r : zone->records()) {
                if (r.name == name) {
                    exists = true;
                    break;
                }
            }
            plan.rcode = exists ? Rcode::NoData : Rcode::NxDomain;
        }
        plan.steps.push_back(std::move(last));
        return plan;
    }
    throw std::logic_error("resolution_plan: CNAME chain longer than 64 hops at " +
                           qname.to_string());
}

double expected_service_time(const Namespace& ns, const DomainName& qname, RType rtype) {
    RecordCache warm;
    for (const auto& [origin, zone] : ns.zones()) {
        warm.insert(zone.ns_record(), 0.0);
    }
    const PlanResult result = resolution_plan(ns, warm, qname, rtype, 0.0);
    const auto* plan = std::get_if<ResolutionPlan>(&result);
    if (plan == nullptr) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& step : plan->steps) {
        total += ns.zone(step.zone).mean_latency();
    }
    return total;
}

}  // namespace recursim
