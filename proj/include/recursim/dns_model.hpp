#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "recursim/dns_name.hpp"
#include "recursim/rng.hpp"

namespace recursim {

/// Simulation clock value in seconds.
using SimTime = double;

enum class RType : std::uint8_t { A, NS, CNAME, SOA };

std::string_view to_string(RType type);
RType parse_rtype(std::string_view text);

/// rdata is a target name for NS and CNAME, an opaque token otherwise.
using RData = std::variant<DomainName, std::string>;

struct ResourceRecord {
    DomainName name;
    RType rtype = RType::A;
    std::uint32_t ttl_s = 0;
    RData rdata;

    /// Throws std::invalid_argument for CNAMEs pointing at themselves or
    /// name-typed records carrying an opaque token.
    void validate() const;

    const DomainName* target() const { return std::get_if<DomainName>(&rdata); }

    bool operator==(const ResourceRecord&) const = default;
};

/// Response latency of one authoritative server: constant, or uniform on
/// [min_s, max_s] drawn from the simulation's generator.
struct LatencyModel {
    enum class Kind : std::uint8_t { Constant, Uniform };

    Kind kind = Kind::Constant;
    double min_s = 0.0;
    double max_s = 0.0;

    static LatencyModel constant(double seconds) { return {Kind::Constant, seconds, seconds}; }
    static LatencyModel uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

    double sample(Rng& rng) const;
    double mean() const { return kind == Kind::Constant ? min_s : 0.5 * (min_s + max_s); }
    void validate() const;

    bool operator==(const LatencyModel&) const = default;
};

struct AuthServer {
    std::string id;
    LatencyModel latency;

    bool operator==(const AuthServer&) const = default;
};

/// An authoritative zone. The zone's NS record (name == origin) carries the
/// TTL handed out in referrals and authority sections.
class AuthZone {
public:
    static constexpr std::uint32_t kDefaultNsTtl = 86400;

    AuthZone(DomainName origin, std::vector<AuthServer> servers,
             std::uint32_t ns_ttl_s = kDefaultNsTtl);

    const DomainName& origin() const { return origin_; }
    const std::vector<AuthServer>& servers() const { return servers_; }
    const std::vector<ResourceRecord>& records() const { return records_; }

    /// Adds or replaces the record with the same (name, rtype). Throws
    /// std::invalid_argument for names outside the zone.
    void add_record(ResourceRecord record);

    const ResourceRecord& ns_record() const;
    std::uint32_t ns_ttl() const { return ns_record().ttl_s; }

    const ResourceRecord* find(const DomainName& name, RType rtype) const;

    /// Mean over servers of their mean latency.
    double mean_latency() const;

    bool operator==(const AuthZone&) const = default;

private:
    DomainName origin_;
    std::vector<AuthServer> servers_;
    std::vector<ResourceRecord> records_;
};

/// The set of authoritative zones the simulated resolver can reach.
class Namespace {
public:
    /// Throws std::invalid_argument when a zone with the same origin exists
    /// or a record of the new zone belongs to a deeper declared zone.
    void add_zone(AuthZone zone);

    /// Adds a record to the zone with origin `origin`.
    void add_record(const DomainName& origin, ResourceRecord record);

    bool has_root() const { return zones_.contains(DomainName::root()); }
    bool contains(const DomainName& origin) const { return zones_.contains(origin); }
    const AuthZone& zone(const DomainName& origin) const;
    const std::map<DomainName, AuthZone>& zones() const { return zones_; }

    /// Deepest declared zone at or above `name`, or nullptr.
    const AuthZone* covering_zone(const DomainName& name) const;

    /// Declared zones from the root down to `zone_origin`, inclusive.
    std::vector<const AuthZone*> delegation_path(const DomainName& zone_origin) const;

    /// Checks that every record sits in its deepest covering zone and that
    /// CNAME chains are acyclic. Throws std::invalid_argument.
    void validate() const;

    bool operator==(const Namespace&) const = default;

private:
    std::map<DomainName, AuthZone> zones_;
};

}  // namespace recursim
