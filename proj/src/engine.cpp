#include "recursim/engine.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace recursim {

std::string_view to_string(Disposition d) {
    switch (d) {
        case Disposition::Answered: return "answered";
        case Disposition::ServfailTimeout: return "servfail_timeout";
        case Disposition::ServfailDroppedEarly: return "servfail_dropped_early";
        case Disposition::RejectedAtAdmission: return "rejected_at_admission";
    }
    return "?";
}

const AuthServer& select_server(const AuthZone& zone, Rng& rng) {
    const auto& servers = zone.servers();
    if (servers.size() == 1) {
        return servers.front();
    }
    return servers[uniform_index(rng, servers.size())];
}

ResolverEngine::ResolverEngine(Namespace ns, Rng server_rng, EngineOptions options)
    : ns_(std::move(ns)),
      rng_(std::move(server_rng)),
      options_(std::move(options)),
      soft_quota_(soft_quota(options_.quota.recursive_clients)) {
    options_.quota.validate();
    if (!ns_.has_root()) {
        throw std::invalid_argument("namespace has no root zone");
    }
    if (!(options_.sampling_interval_s > 0.0)) {
        throw std::invalid_argument("sampling interval must be positive");
    }
    results_.sampling_interval_s = options_.sampling_interval_s;
}

void ResolverEngine::push(SimTime at, decltype(SimEvent::kind) kind) {
    queue_.push(SimEvent{at, next_seq_++, std::move(kind)});
}

QueryId ResolverEngine::schedule_arrival(SimTime at, ClientId client, Query query) {
    if (at < now_) {
        throw std::invalid_argument("arrival scheduled in the past");
    }
    const QueryId id = next_query_++;
    push(at, QueryArrival{client, std::move(query), id});
    return id;
}

std::optional<SimTime> ResolverEngine::next_event_time() const {
    if (queue_.empty()) {
        return std::nullopt;
    }
    return queue_.top().at;
}

OutcomeCounters& ResolverEngine::counters_for(ClientId client) {
    return results_.per_client[client];
}

bool ResolverEngine::step() {
    if (queue_.empty()) {
        return false;
    }
    SimEvent ev = queue_.top();
    queue_.pop();
    now_ = ev.at;
    std::visit(
        [&](auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, QueryArrival>) {
                on_arrival(kind, ev.at);
            } else if constexpr (std::is_same_v<T, LookupResponse>) {
                on_lookup_response(kind, ev.at);
            } else {
                on_timeout(kind.recursion, ev.at);
            }
        },
        ev.kind);
    ++results_.events_processed;
    if (pending_.size() > options_.quota.recursive_clients) {
        throw InvariantViolation("pending count " + std::to_string(pending_.size()) +
                                 " exceeds recursive_clients at t=" + std::to_string(now_));
    }
    return true;
}

void ResolverEngine::on_arrival(const QueryArrival& arrival, SimTime now) {
    ++results_.total.injected;
    ++counters_for(arrival.client).injected;

    PlanResult planned = resolution_plan(ns_, cache_, arrival.query.qname, arrival.query.rtype, now);
    if (auto* cached = std::get_if<CachedAnswer>(&planned)) {
        QueryOutcome out;
        out.query_id = arrival.query_id;
        out.client = arrival.client;
        out.arrived_at = now;
        out.finished_at = now;
        out.disposition = Disposition::Answered;
        out.rcode = Rcode::NoError;
        out.from_cache = true;
        out.answer = cached->answer;
        out.authority_ns_ttl = cached->authority_ns_ttl;
        finish(std::move(out));
        return;
    }
    const AdmitResult admitted = admit_query(arrival.client, arrival.query_id, arrival.query,
                                             std::get<ResolutionPlan>(std::move(planned)), now);
    if (admitted.recursion) {
        start_or_advance_lookup(*admitted.recursion, now);
    }
}

AdmitResult ResolverEngine::admit_query(ClientId client, QueryId query_id, const Query& query,
                                        ResolutionPlan plan, SimTime now) {
    const std::uint64_t p = pending_.size();
    const std::uint64_t hard = options_.quota.recursive_clients;
    AdmitResult result;

    if (p >= hard) {
        result.kind = AdmitResult::Kind::Rejected;
        if (options_.drop_on_reject) {
            result.kind = AdmitResult::Kind::RejectedWithDrop;
            result.victim = select_victim();
            drop(*result.victim, now);
        }
        QueryOutcome out;
        out.query_id = query_id;
        out.client = client;
        out.arrived_at = now;
        out.finished_at = now;
        out.disposition = Disposition::RejectedAtAdmission;
        out.rcode = Rcode::ServFail;
        finish(std::move(out));
        return result;
    }

    // With L = 1 the soft quota is 0 and the first admission finds nobody
    // to push out.
    if (p >= soft_quota_ && p > 0) {
        result.kind = AdmitResult::Kind::AdmittedWithDrop;
        result.victim = select_victim();
        drop(*result.victim, now);
    }

    const RecursionId id = next_recursion_++;
    PendingRecursion rec;
    rec.id = id;
    rec.client = client;
    rec.query_id = query_id;
    rec.query = query;
    rec.arrived_at = now;
    rec.deadline = now + options_.quota.configured_timeout_s;
    rec.plan = std::move(plan);
    pending_.emplace(id, std::move(rec));
    recursion_owner_.push_back(client);
    push(now + options_.quota.configured_timeout_s, TimeoutFire{id});
    result.recursion = id;
    return result;
}

RecursionId ResolverEngine::select_victim() const {
    if (pending_.empty()) {
        throw std::logic_error("select_victim: no pending recursion");
    }
    // Ids are handed out in arrival order, so the smallest id is the oldest.
    return pending_.begin()->first;
}

void ResolverEngine::drop(RecursionId victim, SimTime now) {
    auto it = pending_.find(victim);
    const PendingRecursion& rec = it->second;
    QueryOutcome out;
    out.query_id = rec.query_id;
    out.client = rec.client;
    out.arrived_at = rec.arrived_at;
    out.finished_at = now;
    out.disposition = Disposition::ServfailDroppedEarly;
    out.rcode = Rcode::ServFail;
    out.lookup_time_s = rec.lookup_time_s;
    results_.drop_ages_s.push_back(now - rec.arrived_at);
    pending_.erase(it);
    finish(std::move(out));
}

void ResolverEngine::start_or_advance_lookup(RecursionId id, SimTime now) {
    auto it = pending_.find(id);
    if (it == pending_.end()) {
        throw std::logic_error("start_or_advance_lookup: recursion not pending");
    }
    PendingRecursion& rec = it->second;
    if (rec.outstanding) {
        throw std::logic_error("start_or_advance_lookup: lookup already outstanding");
    }
    if (rec.cursor >= rec.plan.steps.size()) {
        QueryOutcome out;
        out.query_id = rec.query_id;
        out.client = rec.client;
        out.arrived_at = rec.arrived_at;
        out.finished_at = now;
        out.disposition = Disposition::Answered;
        out.rcode = rec.plan.rcode;
        out.lookup_time_s = rec.lookup_time_s;
        out.answer = rec.plan.answer;
        out.authority_ns_ttl = rec.plan.authority_ns_ttl;
        out.last_server = rec.last_server;
        pending_.erase(it);
        finish(std::move(out));
        return;
    }
    const LookupStep& step = rec.plan.steps[rec.cursor];
    const AuthZone& zone = ns_.zone(step.zone);
    const AuthServer& server = select_server(zone, rng_);
    const double latency = server.latency.sample(rng_);
    rec.outstanding = OutstandingLookup{step.zone, server.id, step.qname, now + latency,
                                        rec.cursor, latency};
    push(now + latency, LookupResponse{id, rec.cursor});
}

void ResolverEngine::on_lookup_response(const LookupResponse& response, SimTime now) {
    auto it = pending_.find(response.recursion);
    if (it == pending_.end() || !it->second.outstanding ||
        it->second.outstanding->token != response.token) {
        ++results_.total.late_responses_discarded;
        const ClientId client = recursion_owner_.at(response.recursion);
        ++counters_for(client).late_responses_discarded;
        results_.late_discards.push_back(LateDiscard{now, response.recursion, client});
        return;
    }
    PendingRecursion& rec = it->second;
    const LookupStep& step = rec.plan.steps[rec.cursor];
    if (step.learned) {
        cache_.insert(*step.learned, now);
    }
    rec.lookup_time_s += rec.outstanding->latency_s;
    rec.last_server = rec.outstanding->server_id;
    rec.outstanding.reset();
    ++rec.cursor;
    start_or_advance_lookup(rec.id, now);
}

void ResolverEngine::on_timeout(RecursionId id, SimTime now) {
    auto it = pending_.find(id);
    if (it == pending_.end()) {
        return;
    }
    const PendingRecursion& rec = it->second;
    QueryOutcome out;
    out.query_id = rec.query_id;
    out.client = rec.client;
    out.arrived_at = rec.arrived_at;
    out.finished_at = now;
    out.disposition = Disposition::ServfailTimeout;
    out.rcode = Rcode::ServFail;
    out.lookup_time_s = rec.lookup_time_s;
    pending_.erase(it);
    finish(std::move(out));
}

void ResolverEngine::finish(QueryOutcome outcome) {
    auto tally = [&](OutcomeCounters& c) {
        switch (outcome.disposition) {
            case Disposition::Answered:
                ++c.answered;
                c.answered_from_cache += outcome.from_cache ? 1 : 0;
                c.answered_nxdomain += outcome.rcode == Rcode::NxDomain ? 1 : 0;
                c.service_times_s.push_back(outcome.finished_at - outcome.arrived_at);
                break;
            case Disposition::ServfailTimeout: ++c.servfail_timeout; break;
            case Disposition::ServfailDroppedEarly: ++c.servfail_dropped_early; break;
            case Disposition::RejectedAtAdmission: ++c.rejected_at_admission; break;
        }
    };
    tally(results_.total);
    tally(counters_for(outcome.client));
    if (options_.keep_outcome_log) {
        outcome_index_.emplace(outcome.query_id, results_.outcomes.size());
        results_.outcomes.push_back(std::move(outcome));
    }
}

const QueryOutcome* ResolverEngine::outcome_of(QueryId id) const {
    auto it = outcome_index_.find(id);
    return it == outcome_index_.end() ? nullptr : &results_.outcomes[it->second];
}

RunResult ResolverEngine::run(std::span<const Arrival> arrivals, SimTime horizon) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("run: horizon must be positive");
    }
    for (std::size_t i = 1; i < arrivals.size(); ++i) {
        if (arrivals[i].at < arrivals[i - 1].at) {
            throw std::invalid_argument("run: arrival stream is not sorted by time");
        }
    }
    for (const auto& a : arrivals) {
        if (a.at >= horizon) {
            break;
        }
        schedule_arrival(a.at, a.client, a.query);
    }

    const double interval = options_.sampling_interval_s;
    const auto samples =
        static_cast<std::size_t>(std::floor(horizon / interval + 1e-9)) + 1;
    results_.pending_series.reserve(samples);
    std::size_t next_sample = 0;
    auto sample_until = [&](SimTime t) {
        while (next_sample < samples && static_cast<double>(next_sample) * interval < t) {
            results_.pending_series.push_back(pending_.size());
            ++next_sample;
        }
    };

    while (auto t = next_event_time()) {
        sample_until(*t);
        step();
    }
    sample_until(std::numeric_limits<double>::infinity());
    results_.end_time = now_;

    if (!pending_.empty()) {
        throw InvariantViolation("run: recursions still pending after the queue drained");
    }
    auto conserved = [](const OutcomeCounters& c) { return c.finished() == c.injected; };
    if (!conserved(results_.total)) {
        throw InvariantViolation("run: outcome counters do not add up to injected queries");
    }
    for (const auto& [client, c] : results_.per_client) {
        if (!conserved(c)) {
            throw InvariantViolation("run: per-client counters do not add up for client " +
                                     std::to_string(client));
        }
    }
    return results_;
}

}  // namespace recursim
