#include "recursim/probe.hpp"

#include <cmath>

namespace recursim {

namespace {

constexpr std::size_t kProbeLabelLength = 12;

}  // namespace

SimulatedEndpoint::SimulatedEndpoint(Namespace ns, QuotaConfig quota, Rng rng,
                                     double client_link_s, double jitter_s)
    : engine_(std::move(ns), make_stream(rng(), 0), EngineOptions{.quota = quota}),
      jitter_rng_(make_stream(rng(), 1)),
      client_link_s_(client_link_s),
      jitter_s_(jitter_s) {
    if (client_link_s < 0.0 || jitter_s < 0.0) {
        throw std::invalid_argument("client link latency and jitter must be non-negative");
    }
}

EndpointResponse SimulatedEndpoint::query(const DomainName& qname, RType rtype) {
    const SimTime at_resolver = now_ + client_link_s_ / 2.0;
    const QueryId id = engine_.schedule_arrival(at_resolver, kProbeClient, Query{qname, rtype});
    const QueryOutcome* out = nullptr;
    while ((out = engine_.outcome_of(id)) == nullptr) {
        if (!engine_.step()) {
            throw std::logic_error("simulated resolver never answered the probe query");
        }
    }

    EndpointResponse resp;
    resp.rcode = out->rcode;
    resp.from_cache = out->from_cache;
    resp.server = out->last_server;
    if (out->disposition == Disposition::Answered) {
        // Lookup latencies are summed rather than differenced off the clock
        // so constant-latency scenarios give exact RTTs.
        resp.rtt_s = client_link_s_ + out->lookup_time_s;
        if (out->answer) {
            resp.answer_ttl = out->answer->ttl_s;
        }
        resp.authority_ns_ttl = out->authority_ns_ttl;
    } else {
        resp.timed_out = out->disposition == Disposition::ServfailTimeout;
        resp.rtt_s = client_link_s_ + (out->finished_at - out->arrived_at);
    }
    if (jitter_s_ > 0.0) {
        resp.rtt_s += uniform_real(jitter_rng_, -jitter_s_, jitter_s_);
    }
    now_ = out->finished_at + client_link_s_ / 2.0;
    return resp;
}

double estimate_client_rtt(ResolverEndpoint& endpoint, const DomainName& testing_name) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        const EndpointResponse prime = endpoint.query(testing_name, RType::A);
        if (prime.rcode != Rcode::NoError || !prime.answer_ttl) {
            throw Unmeasurable("testing name " + testing_name.to_string() +
                               " did not resolve to an answer");
        }
        if (*prime.answer_ttl == 0) {
            throw Unmeasurable("testing name " + testing_name.to_string() +
                               " has TTL 0 and cannot be cached");
        }
        const SimTime expires = endpoint.now() + static_cast<double>(*prime.answer_ttl);
        if (endpoint.now() >= expires) {
            continue;
        }
        const EndpointResponse cached = endpoint.query(testing_name, RType::A);
        if (cached.rcode == Rcode::NoError && cached.from_cache) {
            return cached.rtt_s;
        }
    }
    throw Unmeasurable("repeat query for " + testing_name.to_string() + " missed the cache");
}

ProbeMeasurement estimate_auth_rtt(ResolverEndpoint& endpoint, const DomainName& zone,
                                   double r_c_s, Rng& rng, std::size_t trial_index) {
    const EndpointResponse apex = endpoint.query(zone, RType::A);
    if (apex.rcode == Rcode::ServFail || apex.timed_out) {
        throw Unmeasurable("candidate zone " + zone.to_string() + " did not resolve");
    }
    if (!apex.authority_ns_ttl || *apex.authority_ns_ttl == 0) {
        throw Unmeasurable("candidate zone " + zone.to_string() +
                           " has no cacheable NS set to keep the delegation warm");
    }
    const SimTime ns_expires = endpoint.now() + static_cast<double>(*apex.authority_ns_ttl);

    for (std::size_t attempt = 0; attempt <= kCacheHitRetries; ++attempt) {
        if (endpoint.now() >= ns_expires) {
            throw Unmeasurable("NS TTL of " + zone.to_string() + " lapsed before the trial");
        }
        const DomainName qname = random_qname(rng, kProbeLabelLength, zone);
        const EndpointResponse resp = endpoint.query(qname, RType::A);
        if (resp.from_cache) {
            continue;
        }
        if (resp.rcode == Rcode::ServFail || resp.timed_out) {
            throw Unmeasurable("randomized query " + qname.to_string() + " failed");
        }
        ProbeMeasurement m;
        m.r_c_s = r_c_s;
        m.r_t_s = resp.rtt_s;
        m.r_a_s = m.r_t_s - m.r_c_s;
        m.candidate = zone;
        m.trial_index = trial_index;
        m.valid = m.r_t_s >= m.r_c_s;
        m.qname = qname;
        m.server = resp.server;
        return m;
    }
    throw Unmeasurable("randomized names in " + zone.to_string() + " kept hitting the cache");
}

std::string_view to_string(SlowDomainVerdict::Kind kind) {
    switch (kind) {
        case SlowDomainVerdict::Kind::Slow: return "slow";
        case SlowDomainVerdict::Kind::Fast: return "fast";
        case SlowDomainVerdict::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

SlowDomainVerdict classify_slow_domain(ResolverEndpoint& endpoint, const DomainName& zone,
                                       double r_c_s, double min_delay_s, std::size_t n_trials,
                                       Rng& rng) {
    SlowDomainVerdict verdict;
    if (n_trials == 0) {
        verdict.reason = "no trials requested";
        return verdict;
    }
    for (std::size_t i = 0; i < n_trials; ++i) {
        try {
            verdict.trials.push_back(estimate_auth_rtt(endpoint, zone, r_c_s, rng, i));
        } catch (const Unmeasurable& e) {
            verdict.kind = SlowDomainVerdict::Kind::Inconclusive;
            verdict.reason = e.what();
            return verdict;
        }
        const ProbeMeasurement& m = verdict.trials.back();
        if (!m.valid) {
            verdict.kind = SlowDomainVerdict::Kind::Inconclusive;
            verdict.reason = "trial " + std::to_string(i) + " measured R_t < R_c";
            return verdict;
        }
        if (!verdict.evidence && m.r_a_s < min_delay_s) {
            verdict.evidence = i;
        }
    }
    verdict.kind = verdict.evidence ? SlowDomainVerdict::Kind::Fast : SlowDomainVerdict::Kind::Slow;
    return verdict;
}

double coverage_probability(std::size_t n_servers, std::size_t trials) {
    // Inclusion-exclusion over the servers that are never picked.
    const auto n = static_cast<long double>(n_servers);
    long double total = 0.0L;
    long double binom = 1.0L;
    for (std::size_t k = 0; k <= n_servers; ++k) {
        const long double miss = std::pow((n - static_cast<long double>(k)) / n,
                                          static_cast<long double>(trials));
        total += (k % 2 == 0 ? 1.0L : -1.0L) * binom * miss;
        binom = binom * static_cast<long double>(n_servers - k) / static_cast<long double>(k + 1);
    }
    return static_cast<double>(total);
}

std::size_t recommended_trials(std::size_t n_servers, double confidence) {
    if (n_servers < 1) {
        throw std::domain_error("recommended_trials: need at least one server");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::domain_error("recommended_trials: confidence must be in (0, 1)");
    }
    for (std::size_t t = n_servers;; ++t) {
        if (coverage_probability(n_servers, t) >= confidence) {
            return t;
        }
    }
}

ProbeReport run_probe(ResolverEndpoint& endpoint, const DomainName& testing_name,
                      const DomainName& zone, double min_delay_s, std::size_t n_trials, Rng& rng) {
    ProbeReport report;
    report.zone = zone;
    report.testing_name = testing_name;
    report.min_delay_s = min_delay_s;
    report.n_trials = n_trials;
    try {
        report.r_c_s = estimate_client_rtt(endpoint, testing_name);
    } catch (const Unmeasurable& e) {
        report.verdict.kind = SlowDomainVerdict::Kind::Inconclusive;
        report.verdict.reason = e.what();
        return report;
    }
    report.verdict =
        classify_slow_domain(endpoint, zone, *report.r_c_s, min_delay_s, n_trials, rng);
    return report;
}

}  // namespace recursim
