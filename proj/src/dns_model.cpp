#include "recursim/dns_model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace recursim {

std::string_view to_string(RType type) {
    switch (type) {
        case RType::A: return "A";
        case RType::NS: return "NS";
        case RType::CNAME: return "CNAME";
        case RType::SOA: return "SOA";
    }
    return "?";
}

RType parse_rtype(std::string_view text) {
    if (text == "A") return RType::A;
    if (text == "NS") return RType::NS;
    if (text == "CNAME" || text == "DNAME") return RType::CNAME;
    if (text == "SOA") return RType::SOA;
    throw std::invalid_argument("unknown record type: " + std::string(text));
}

void ResourceRecord::validate() const {
    const bool wants_name = rtype == RType::NS || rtype == RType::CNAME;
    if (wants_name && target() == nullptr) {
        throw std::invalid_argument(std::string(to_string(rtype)) + " record " +
                                    name.to_string() + " needs a domain name target");
    }
    if (rtype == RType::CNAME && *target() == name) {
        throw std::invalid_argument("CNAME " + name.to_string() + " points at itself");
    }
}

double LatencyModel::sample(Rng& rng) const {
    if (kind == Kind::Constant) {
        return min_s;
    }
    return uniform_real(rng, min_s, max_s);
}

void LatencyModel::validate() const {
    if (!std::isfinite(min_s) || !std::isfinite(max_s) || min_s < 0.0 || max_s < min_s) {
        throw std::invalid_argument("latency model needs 0 <= min <= max");
    }
}

AuthZone::AuthZone(DomainName origin, std::vector<AuthServer> servers, std::uint32_t ns_ttl_s)
    : origin_(std::move(origin)), servers_(std::move(servers)) {
    if (servers_.empty()) {
        throw std::invalid_argument("zone " + origin_.to_string() + " has no servers");
    }
    for (const auto& s : servers_) {
        s.latency.validate();
    }
    records_.push_back(ResourceRecord{origin_, RType::NS, ns_ttl_s,
                                      origin_.prepend("ns")});
}

void AuthZone::add_record(ResourceRecord record) {
    if (!record.name.is_at_or_below(origin_)) {
        throw std::invalid_argument("record " + record.name.to_string() + " is outside zone " +
                                    origin_.to_string());
    }
    record.validate();
    for (auto& existing : records_) {
        if (existing.name == record.name && existing.rtype == record.rtype) {
            existing = std::move(record);
            return;
        }
    }
    records_.push_back(std::move(record));
}

const ResourceRecord& AuthZone::ns_record() const {
    // Installed first by the constructor; add_record only replaces in place.
    return records_.front();
}

const ResourceRecord* AuthZone::find(const DomainName& name, RType rtype) const {
    for (const auto& r : records_) {
        if (r.rtype == rtype && r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

double AuthZone::mean_latency() const {
    double sum = 0.0;
    for (const auto& s : servers_) {
        sum += s.latency.mean();
    }
    return sum / static_cast<double>(servers_.size());
}

void Namespace::add_zone(AuthZone zone) {
    const DomainName origin = zone.origin();
    if (zones_.contains(origin)) {
        throw std::invalid_argument("duplicate zone " + origin.to_string());
    }
    zones_.emplace(origin, std::move(zone));
}

void Namespace::add_record(const DomainName& origin, ResourceRecord record) {
    auto it = zones_.find(origin);
    if (it == zones_.end()) {
        throw std::invalid_argument("no zone " + origin.to_string());
    }
    it->second.add_record(std::move(record));
}

const AuthZone& Namespace::zone(const DomainName& origin) const {
    auto it = zones_.find(origin);
    if (it == zones_.end()) {
        throw std::out_of_range("no zone " + origin.to_string());
    }
    return it->second;
}

const AuthZone* Namespace::covering_zone(const DomainName& name) const {
    DomainName probe = name;
    while (true) {
        if (auto it = zones_.find(probe); it != zones_.end()) {
            return &it->second;
        }
        if (probe.is_root()) {
            return nullptr;
        }
        probe = probe.parent();
    }
}

std::vector<const AuthZone*> Namespace::delegation_path(const DomainName& zone_origin) const {
    std::vector<const AuthZone*> path;
    DomainName probe = zone_origin;
    while (true) {
        if (auto it = zones_.find(probe); it != zones_.end()) {
            path.push_back(&it->second);
        }
        if (probe.is_root()) {
            break;
        }
        probe = probe.parent();
    }
    return {path.rbegin(), path.rend()};
}

void Namespace::validate() const {
    for (const auto& [origin, zone] : zones_) {
        for (const auto& r : zone.records()) {
            if (r.rtype == RType::NS && r.name == origin) {
                continue;
            }
            const AuthZone* owner = covering_zone(r.name);
            if (owner != &zone) {
                throw std::invalid_argument("record " + r.name.to_string() + " declared in zone " +
                                            origin.to_string() + " belongs to zone " +
                                            owner->origin().to_string());
            }
        }
    }
    // CNAME cycles would make resolution plans unbounded.
    for (const auto& [origin, zone] : zones_) {
        for (const auto& r : zone.records()) {
            if (r.rtype != RType::CNAME) {
                continue;
            }
            std::set<DomainName> seen{r.name};
            const ResourceRecord* link = &r;
            while (link != nullptr) {
                const DomainName& next = *link->target();
                if (!seen.insert(next).second) {
                    throw std::invalid_argument("CNAME loop through " + r.name.to_string());
                }
                const AuthZone* z = covering_zone(next);
                link = z ? z->find(next, RType::CNAME) : nullptr;
            }
        }
    }
}

}  // namespace recursim
