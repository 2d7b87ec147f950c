#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "recursim/dns_model.hpp"
#include "recursim/engine.hpp"
#include "recursim/resolution_plan.hpp"
#include "recursim/rng.hpp"

namespace recursim {

/// What a client sees for one query sent to a recursive resolver.
struct EndpointResponse {
    Rcode rcode = Rcode::NoError;
    bool timed_out = false;
    double rtt_s = 0.0;
    std::optional<std::uint32_t> answer_ttl;
    std::optional<std::uint32_t> authority_ns_ttl;
    /// Set when the resolver answered from its cache.
    bool from_cache = false;
    /// Authoritative server that answered the last lookup, when known.
    std::optional<std::string> server;
};

/// A recursive resolver the probe can talk to. Implementations own a clock
/// that advances with every query.
class ResolverEndpoint {
public:
    virtual ~ResolverEndpoint() = default;
    virtual EndpointResponse query(const DomainName& qname, RType rtype) = 0;
    virtual SimTime now() const = 0;
};

/// Endpoint backed by a private resolver simulation. The client link adds
/// `client_link_s` of round trip to every query; `jitter_s` adds uniform
/// noise in [-jitter_s, jitter_s] to each observed RTT.
class SimulatedEndpoint : public ResolverEndpoint {
public:
    SimulatedEndpoint(Namespace ns, QuotaConfig quota, Rng rng, double client_link_s,
                      double jitter_s = 0.0);

    EndpointResponse query(const DomainName& qname, RType rtype) override;
    SimTime now() const override { return now_; }

    /// Moves the client clock forward, e.g. to let cached data expire.
    void advance(double seconds) { now_ += seconds; }

    const ResolverEngine& engine() const { return engine_; }

private:
    static constexpr ClientId kProbeClient = 0;

    ResolverEngine engine_;
    Rng jitter_rng_;
    double client_link_s_;
    double jitter_s_;
    SimTime now_ = 0.0;
};

/// Thrown when a measurement cannot be taken as the procedure requires.
class Unmeasurable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProbeMeasurement {
    double r_c_s = 0.0;
    double r_t_s = 0.0;
    double r_a_s = 0.0;
    DomainName candidate;
    std::size_t trial_index = 0;
    /// False when R_t < R_c; such trials are reported, never clamped.
    bool valid = true;
    DomainName qname;
    std::optional<std::string> server;
};

inline constexpr std::size_t kCacheHitRetries = 3;

/// Client-to-resolver RTT (R_c): prime the cache with `testing_name`, then
/// repeat the query within the answer TTL and time the cached answer.
/// Throws Unmeasurable when priming is impossible (negative answer or zero
/// TTL) or the repeat misses the cache twice.
double estimate_client_rtt(ResolverEndpoint& endpoint, const DomainName& testing_name);

/// One trial against `zone`: query the zone itself to learn its NS TTL,
/// then within that TTL query a fresh random name in the zone so the
/// resolver has to go to an authoritative server. R_t is that RTT and
/// R_a = R_t - R_c.
ProbeMeasurement estimate_auth_rtt(ResolverEndpoint& endpoint, const DomainName& zone,
                                   double r_c_s, Rng& rng, std::size_t trial_index = 0);

struct SlowDomainVerdict {
    enum class Kind : std::uint8_t { Slow, Fast, Inconclusive };

    Kind kind = Kind::Inconclusive;
    std::vector<ProbeMeasurement> trials;
    /// Index into `trials` of the first trial below the threshold.
    std::optional<std::size_t> evidence;
    std::string reason;
};

std::string_view to_string(SlowDomainVerdict::Kind kind);

/// Slow iff every one of `n_trials` trials has R_a >= min_delay_s. Any
/// unmeasurable or invalid trial makes the verdict inconclusive.
SlowDomainVerdict classify_slow_domain(ResolverEndpoint& endpoint, const DomainName& zone,
                                       double r_c_s, double min_delay_s, std::size_t n_trials,
                                       Rng& rng);

/// Smallest number of uniform server picks after which every one of
/// `n_servers` servers has been picked at least once with probability
/// >= `confidence`.
std::size_t recommended_trials(std::size_t n_servers, double confidence);

/// Probability that `trials` uniform picks cover all `n_servers` servers.
double coverage_probability(std::size_t n_servers, std::size_t trials);

struct ProbeReport {
    DomainName zone;
    DomainName testing_name;
    double min_delay_s = 0.0;
    std::size_t n_trials = 0;
    std::optional<double> r_c_s;
    SlowDomainVerdict verdict;
};

/// Full procedure: R_c once, then classify_slow_domain.
ProbeReport run_probe(ResolverEndpoint& endpoint, const DomainName& testing_name,
                      const DomainName& zone, double min_delay_s, std::size_t n_trials, Rng& rng);

}  // namespace recursim
