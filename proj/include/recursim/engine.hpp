#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "recursim/cache.hpp"
#include "recursim/dns_model.hpp"
#include "recursim/quota_math.hpp"
#include "recursim/resolution_plan.hpp"
#include "recursim/rng.hpp"

namespace recursim {

using ClientId = std::uint32_t;
using RecursionId = std::uint64_t;
using QueryId = std::uint64_t;

struct Query {
    DomainName qname;
    RType rtype = RType::A;

    bool operator==(const Query&) const = default;
};

/// Raised when the engine detects a broken internal invariant.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct QueryArrival {
    ClientId client = 0;
    Query query;
    QueryId query_id = 0;
};

struct LookupResponse {
    RecursionId recursion = 0;
    std::uint64_t token = 0;  // index of the plan step the lookup was sent for
};

struct TimeoutFire {
    RecursionId recursion = 0;
};

/// Events are totally ordered by (at, seq); seq is assigned at creation.
struct SimEvent {
    SimTime at = 0.0;
    std::uint64_t seq = 0;
    std::variant<QueryArrival, LookupResponse, TimeoutFire> kind;
};

struct OutstandingLookup {
    DomainName zone;
    std::string server_id;
    DomainName qname;
    SimTime due_at = 0.0;
    std::uint64_t token = 0;
    double latency_s = 0.0;
};

struct PendingRecursion {
    RecursionId id = 0;
    ClientId client = 0;
    QueryId query_id = 0;
    Query query;
    SimTime arrived_at = 0.0;
    SimTime deadline = 0.0;
    ResolutionPlan plan;
    std::size_t cursor = 0;
    std::optional<OutstandingLookup> outstanding;
    double lookup_time_s = 0.0;
    std::optional<std::string> last_server;
};

enum class Disposition : std::uint8_t {
    Answered,
    ServfailTimeout,
    ServfailDroppedEarly,
    RejectedAtAdmission,
};

std::string_view to_string(Disposition d);

/// What the client of one query eventually received.
struct QueryOutcome {
    QueryId query_id = 0;
    ClientId client = 0;
    SimTime arrived_at = 0.0;
    SimTime finished_at = 0.0;
    Disposition disposition = Disposition::Answered;
    Rcode rcode = Rcode::NoError;
    bool from_cache = false;
    /// Sum of the external lookup latencies the recursion completed.
    double lookup_time_s = 0.0;
    std::optional<ResourceRecord> answer;
    std::uint32_t authority_ns_ttl = 0;
    /// Server that answered the last completed lookup, if any.
    std::optional<std::string> last_server;
};

struct LateDiscard {
    SimTime at = 0.0;
    RecursionId recursion = 0;
    ClientId client = 0;
};

struct OutcomeCounters {
    std::uint64_t injected = 0;
    std::uint64_t answered = 0;
    std::uint64_t answered_from_cache = 0;  // subset of answered
    std::uint64_t answered_nxdomain = 0;    // subset of answered
    std::uint64_t servfail_timeout = 0;
    std::uint64_t servfail_dropped_early = 0;
    std::uint64_t rejected_at_admission = 0;
    std::uint64_t late_responses_discarded = 0;
    std::vector<double> service_times_s;

    std::uint64_t finished() const {
        return answered + servfail_timeout + servfail_dropped_early + rejected_at_admission;
    }

    bool operator==(const OutcomeCounters&) const = default;
};

struct EngineOptions {
    QuotaConfig quota;
    /// Drop a pending recursion even when the new query is rejected at the
    /// hard quota.
    bool drop_on_reject = true;
    double sampling_interval_s = 0.1;
    bool keep_outcome_log = true;
};

struct AdmitResult {
    enum class Kind : std::uint8_t { Admitted, AdmittedWithDrop, RejectedWithDrop, Rejected };

    Kind kind = Kind::Admitted;
    std::optional<RecursionId> recursion;
    std::optional<RecursionId> victim;
};

struct RunResult {
    OutcomeCounters total;
    std::map<ClientId, OutcomeCounters> per_client;
    /// Pending count after all events at or before k * sampling_interval_s.
    std::vector<std::size_t> pending_series;
    double sampling_interval_s = 0.0;
    /// Age at drop of every early-dropped recursion, in drop order.
    std::vector<double> drop_ages_s;
    std::vector<QueryOutcome> outcomes;
    std::vector<LateDiscard> late_discards;
    SimTime end_time = 0.0;
    std::uint64_t events_processed = 0;
};

/// Arrival to be injected at `at`.
struct Arrival {
    SimTime at = 0.0;
    ClientId client = 0;
    Query query;
};

/// Discrete-event model of a recursive server with a pending-recursion quota.
///
/// Single-threaded. Queries either hit the cache and are answered at once or
/// become pending recursions that walk their resolution plan one lookup at a
/// time until answered, timed out, or dropped to make room for newer ones.
class ResolverEngine {
public:
    ResolverEngine(Namespace ns, Rng server_rng, EngineOptions options);

    /// Schedules a query arrival; returns its query id.
    QueryId schedule_arrival(SimTime at, ClientId client, Query query);

    /// Processes the next event. Returns false when the queue is empty.
    bool step();
    bool idle() const { return queue_.empty(); }
    SimTime now() const { return now_; }
    std::optional<SimTime> next_event_time() const;

    /// Injects `arrivals` (must be sorted by time; ones at or after `horizon`
    /// are not injected), processes events until the queue drains and
    /// returns counters plus the pending series sampled up to `horizon`.
    /// Throws std::invalid_argument for unsorted input or a non-positive
    /// horizon, InvariantViolation when a quota or conservation check fails.
    RunResult run(std::span<const Arrival> arrivals, SimTime horizon);

    // Individual transitions, public so they can be driven directly.

    AdmitResult admit_query(ClientId client, QueryId query_id, const Query& query,
                            ResolutionPlan plan, SimTime now);
    RecursionId select_victim() const;
    void start_or_advance_lookup(RecursionId id, SimTime now);
    void on_lookup_response(const LookupResponse& response, SimTime now);
    void on_timeout(RecursionId id, SimTime now);

    const std::map<RecursionId, PendingRecursion>& pending() const { return pending_; }
    const RecordCache& cache() const { return cache_; }
    RecordCache& cache() { return cache_; }
    const Namespace& name_space() const { return ns_; }
    const EngineOptions& options() const { return options_; }
    std::uint64_t soft_quota_value() const { return soft_quota_; }

    /// Counters, outcomes and drop ages accumulated so far.
    const RunResult& results() const { return results_; }
    const QueryOutcome* outcome_of(QueryId id) const;

private:
    struct EventOrder {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.at != b.at) {
                return a.at > b.at;
            }
            return a.seq > b.seq;
        }
    };

    void push(SimTime at, decltype(SimEvent::kind) kind);
    void on_arrival(const QueryArrival& arrival, SimTime now);
    void drop(RecursionId victim, SimTime now);
    void finish(QueryOutcome outcome);
    OutcomeCounters& counters_for(ClientId client);

    Namespace ns_;
    Rng rng_;
    EngineOptions options_;
    std::uint64_t soft_quota_;
    RecordCache cache_;
    std::map<RecursionId, PendingRecursion> pending_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;
    std::uint64_t next_seq_ = 0;
    RecursionId next_recursion_ = 0;
    QueryId next_query_ = 0;
    SimTime now_ = 0.0;
    RunResult results_;
    std::map<QueryId, std::size_t> outcome_index_;
    std::vector<ClientId> recursion_owner_;  // indexed by RecursionId
};

/// Uniform choice among the zone's servers.
const AuthServer& select_server(const AuthZone& zone, Rng& rng);

}  // namespace recursim
