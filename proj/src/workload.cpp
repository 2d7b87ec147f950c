#include "recursim/workload.hpp"

#include <cmath>
#include <stdexcept>

namespace recursim {

namespace {

constexpr std::string_view kChainPrefix = "chain";
constexpr std::string_view kDeepPrefix = "deep";

void check_window(double rate, SimTime start, SimTime end, const std::string& name) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("profile " + name + ": rate_qps must be positive");
    }
    if (!(end > start) || start < 0.0) {
        throw std::invalid_argument("profile " + name + ": need 0 <= start_s < end_s");
    }
}

std::vector<SimTime> arrival_times(double rate, SimTime start, SimTime end,
                                   ArrivalProcess process, Rng& rng) {
    std::vector<SimTime> times;
    if (process == ArrivalProcess::Uniform) {
        // Truncated so the declared rate is never exceeded; the epsilon keeps
        // products like 5000 * 1.0 from losing an event to rounding.
        const auto count = static_cast<std::size_t>(std::floor(rate * (end - start) + 1e-9));
        times.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            times.push_back(start + static_cast<double>(k) / rate);
        }
    } else {
        for (SimTime t = start + exponential(rng, rate); t < end; t += exponential(rng, rate)) {
            times.push_back(t);
        }
    }
    return times;
}

DomainName chain_link(const DomainName& zone, std::size_t i) {
    return zone.prepend(std::string(kChainPrefix) + std::to_string(i));
}

DomainName deep_zone(const DomainName& zone, std::size_t depth) {
    DomainName name = zone;
    for (std::size_t i = 1; i <= depth; ++i) {
        name = name.prepend(std::string(kDeepPrefix) + std::to_string(i));
    }
    return name;
}

void require_zone(const Namespace& ns, const DomainName& zone, const std::string& profile) {
    if (!ns.contains(zone)) {
        throw std::invalid_argument("profile " + profile + " references undeclared zone " +
                                    zone.to_string());
    }
}

}  // namespace

DomainName technique_zone(const Technique& technique) {
    return std::visit(
        [](const auto& t) -> DomainName {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ZeroTtlTechnique>) {
                return t.target.parent();
            } else {
                return t.zone;
            }
        },
        technique);
}

std::string_view technique_name(const Technique& technique) {
    static constexpr std::string_view kNames[] = {"random_qname", "zero_ttl", "cname_chain",
                                                  "deep_labels", "slow_domain"};
    return kNames[technique.index()];
}

void AttackProfile::validate() const {
    check_window(rate_qps, start_s, end_s, name);
    if (const auto* r = std::get_if<RandomQnameTechnique>(&technique)) {
        if (r->label_len < 1 || r->label_len > DomainName::kMaxLabelLength) {
            throw std::invalid_argument("profile " + name + ": label_len must be in [1, 63]");
        }
    }
    if (const auto* d = std::get_if<DeepLabelsTechnique>(&technique); d && d->depth < 1) {
        throw std::invalid_argument("profile " + name + ": depth must be >= 1");
    }
}

void LegitProfile::validate() const { check_window(rate_qps, start_s, end_s, name); }

ArrivalStream generate_arrivals(const AttackProfile& profile, ClientId client, Rng& rng) {
    profile.validate();
    ArrivalStream out;
    const auto times =
        arrival_times(profile.rate_qps, profile.start_s, profile.end_s, profile.process, rng);
    if (times.empty()) {
        out.warnings.push_back("profile " + profile.name +
                               ": window shorter than one inter-arrival gap, no queries");
    }
    out.arrivals.reserve(times.size());

    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            for (SimTime at : times) {
                DomainName qname;
                if constexpr (std::is_same_v<T, RandomQnameTechnique>) {
                    qname = random_qname(rng, t.label_len, t.zone);
                } else if constexpr (std::is_same_v<T, ZeroTtlTechnique>) {
                    qname = t.target;
                } else if constexpr (std::is_same_v<T, CnameChainTechnique>) {
                    qname = chain_link(t.zone, 0);
                } else if constexpr (std::is_same_v<T, DeepLabelsTechnique>) {
                    qname = random_qname(rng, RandomQnameTechnique::kDefaultLabelLength,
                                         deep_zone(t.zone, t.depth));
                } else {
                    qname = random_qname(rng, RandomQnameTechnique::kDefaultLabelLength, t.zone);
                }
                out.arrivals.push_back(Arrival{at, client, Query{std::move(qname), RType::A}});
            }
        },
        profile.technique);
    return out;
}

ArrivalStream generate_arrivals(const LegitProfile& profile, ClientId client, Rng& rng) {
    profile.validate();
    ArrivalStream out;
    const auto times =
        arrival_times(profile.rate_qps, profile.start_s, profile.end_s, profile.process, rng);
    if (times.empty()) {
        out.warnings.push_back("profile " + profile.name +
                               ": window shorter than one inter-arrival gap, no queries");
    }
    out.arrivals.reserve(times.size());
    for (SimTime at : times) {
        out.arrivals.push_back(Arrival{at, client, Query{profile.qname, RType::A}});
    }
    return out;
}

std::vector<Arrival> merge_streams(const std::vector<std::vector<Arrival>>& streams) {
    std::vector<Arrival> merged;
    std::size_t total = 0;
    for (const auto& s : streams) {
        total += s.size();
    }
    merged.reserve(total);
    std::vector<std::size_t> cursor(streams.size(), 0);
    while (merged.size() < total) {
        std::size_t best = streams.size();
        for (std::size_t i = 0; i < streams.size(); ++i) {
            if (cursor[i] == streams[i].size()) {
                continue;
            }
            if (best == streams.size() || streams[i][cursor[i]].at < streams[best][cursor[best]].at) {
                best = i;
            }
        }
        merged.push_back(streams[best][cursor[best]++]);
    }
    return merged;
}

void install_technique(const AttackProfile& profile, Namespace& ns) {
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ZeroTtlTechnique>) {
                const AuthZone* zone = ns.covering_zone(t.target);
                if (zone == nullptr || zone->origin().is_root()) {
                    throw std::invalid_argument("profile " + profile.name +
                                                ": no zone declared for " + t.target.to_string());
                }
                if (const ResourceRecord* rec = zone->find(t.target, RType::A)) {
                    if (rec->ttl_s != 0) {
                        throw std::invalid_argument("profile " + profile.name + ": record " +
                                                    t.target.to_string() + " has nonzero TTL");
                    }
                    return;
                }
                ns.add_record(zone->origin(),
                              ResourceRecord{t.target, RType::A, 0, std::string("192.0.2.1")});
            } else if constexpr (std::is_same_v<T, CnameChainTechnique>) {
                require_zone(ns, t.zone, profile.name);
                for (std::size_t i = 0; i < t.chain_len; ++i) {
                    ns.add_record(t.zone, ResourceRecord{chain_link(t.zone, i), RType::CNAME, 0,
                                                         chain_link(t.zone, i + 1)});
                }
                ns.add_record(t.zone, ResourceRecord{chain_link(t.zone, t.chain_len), RType::A, 0,
                                                     std::string("192.0.2.2")});
            } else if constexpr (std::is_same_v<T, DeepLabelsTechnique>) {
                require_zone(ns, t.zone, profile.name);
                const auto servers = ns.zone(t.zone).servers();
                for (std::size_t d = 1; d <= t.depth; ++d) {
                    const DomainName origin = deep_zone(t.zone, d);
                    if (!ns.contains(origin)) {
                        ns.add_zone(AuthZone(origin, servers, 0));
                    }
                }
            } else {
                require_zone(ns, t.zone, profile.name);
            }
        },
        profile.technique);
}

DomainName sample_qname(const AttackProfile& profile) {
    return std::visit(
        [](const auto& t) -> DomainName {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ZeroTtlTechnique>) {
                return t.target;
            } else if constexpr (std::is_same_v<T, CnameChainTechnique>) {
                return chain_link(t.zone, 0);
            } else if constexpr (std::is_same_v<T, DeepLabelsTechnique>) {
                return deep_zone(t.zone, t.depth).prepend("sample");
            } else {
                return t.zone.prepend("sample");
            }
        },
        profile.technique);
}

ProfileCheck validate_profile_against_quota(const AttackProfile& profile, const QuotaConfig& quota,
                                            double expected_service_time_s) {
    const double needed = min_service_time(quota.recursive_clients, profile.rate_qps);
    return ProfileCheck{expected_service_time_s >= needed, needed};
}

}  // namespace recursim
