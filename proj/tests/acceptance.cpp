// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "recursim/probe.hpp"
#include "recursim/quota_math.hpp"
#include "recursim/report.hpp"
#include "reference_sim.hpp"

using namespace recursim;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario shipped(const char* name) {
    return parse_scenario(read_file(std::string(RECURSIM_SCENARIO_DIR "/") + name));
}

const ProfileReport* find_profile(const RunReport& r, const std::string& kind) {
    for (const auto& p : r.profiles) {
        if (p.kind == kind) return &p;
    }
    return nullptr;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// The replication run is shared by several criteria.
struct ReplicationRun {
    RunReport report;
    double wall_s = 0.0;
};

const ReplicationRun& replication() {
    static const ReplicationRun run = [] {
        ReplicationRun r;
        const auto t0 = std::chrono::steady_clock::now();
        r.report = run_scenario(shipped("replication.scn"));
        r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }();
    return run;
}

Outcome effective_timeout_examples() {
    const double a = effective_timeout(1000, 1000.0);
    const double b = effective_timeout(1000, 10000.0);
    const double c = saturating_query_rate(1000, 10.0);
    return {a == 1.0 && b == 0.1 && c == 100.0,
            fmt("T(1000,1000)=%.17g T(1000,10000)=%.17g Q(1000,10)=%.17g", a, b, c)};
}

Outcome memory_example() {
    const auto m = memory_requirement(1'000'000, 20'000).total_bytes;
    return {m == 20'000'000'000ull, fmt("M=%llu bytes", static_cast<unsigned long long>(m))};
}

Outcome soft_quota_rule() {
    const bool examples = soft_quota(1000) == 900 && soft_quota(2000) == 1900 && soft_quota(1001) == 901;
    std::uint64_t violations = 0;
    for (std::uint64_t L = 2; L <= 1'000'000; ++L) {
        if (!(soft_quota(L) < L) || soft_quota(L) < soft_quota(L - 1)) ++violations;
    }
    return {examples && violations == 0,
            fmt("S(1000)=%llu S(2000)=%llu S(1001)=%llu, property violations over [2,1e6]: %llu",
                static_cast<unsigned long long>(soft_quota(1000)),
                static_cast<unsigned long long>(soft_quota(2000)),
                static_cast<unsigned long long>(soft_quota(1001)),
                static_cast<unsigned long long>(violations))};
}

Outcome replication_outcome() {
    const auto& run = replication();
    const ProfileReport* legit = find_profile(run.report, "legit");
    const ProfileReport* attack = find_profile(run.report, "attack");
    if (legit == nullptr || attack == nullptr) return {false, "scenario lacks attack or legit profile"};
    const double legit_dropped = legit->post_warmup.rate(legit->post_warmup.dropped_early);
    const double attack_dropped = attack->post_warmup.rate(attack->post_warmup.dropped_early);
    const auto late = run.report.total.late_responses_discarded;
    const bool ok = legit->post_warmup.injected > 0 && legit_dropped >= 0.99 && attack_dropped >= 0.99 &&
                    late > 0 && run.wall_s < 10.0;
    return {ok, fmt("legit dropped-early %.4f (n=%llu), attack dropped-early %.4f, late discarded %llu, "
                    "wall %.2f s",
                    legit_dropped, static_cast<unsigned long long>(legit->post_warmup.injected),
                    attack_dropped, static_cast<unsigned long long>(late), run.wall_s)};
}

Outcome median_drop_age() {
    const auto& d = replication().report.drop_ages;
    const bool ok = d.count > 0 && std::abs(d.median_s - 0.18) <= 0.0002;
    return {ok, fmt("median drop age %.9f s over %zu drops", d.median_s, d.count)};
}

Outcome counterfactual() {
    const RunReport r = run_scenario(shipped("counterfactual.scn"));
    const ProfileReport* legit = find_profile(r, "legit");
    if (legit == nullptr) return {false, "scenario lacks legit profile"};
    const double answered = legit->post_warmup.rate(legit->post_warmup.answered);
    return {legit->post_warmup.injected > 0 && answered >= 0.95,
            fmt("legit answered %.4f (n=%llu)", answered,
                static_cast<unsigned long long>(legit->post_warmup.injected))};
}

Namespace probe_namespace(std::vector<double> latencies) {
    Namespace ns;
    ns.add_zone(AuthZone(DomainName::root(), {AuthServer{"root", LatencyModel::constant(0.02)}}));
    ns.add_zone(AuthZone(DomainName::parse("example."), {AuthServer{"ns1", LatencyModel::constant(0.04)}}));
    ns.add_record(DomainName::parse("example."),
                  ResourceRecord{DomainName::parse("www.example."), RType::A, 300, std::string("192.0.2.1")});
    std::vector<AuthServer> servers;
    for (std::size_t i = 0; i < latencies.size(); ++i) {
        servers.push_back(AuthServer{"s" + std::to_string(i), LatencyModel::constant(latencies[i])});
    }
    ns.add_zone(AuthZone(DomainName::parse("slow.test."), servers, 3600));
    return ns;
}

Outcome probe_procedure() {
    const auto testing = DomainName::parse("www.example.");
    const auto zone = DomainName::parse("slow.test.");

    SimulatedEndpoint single(probe_namespace({0.5}), QuotaConfig{}, Rng(1), 0.03);
    Rng rng(2);
    const double rc = estimate_client_rtt(single, testing);
    const ProbeMeasurement m = estimate_auth_rtt(single, zone, rc, rng);
    const std::size_t trials = recommended_trials(1, 0.99);
    const auto verdict = classify_slow_domain(single, zone, rc, 0.4, trials, rng);
    const bool single_ok = rc == 0.03 && m.r_t_s == 0.53 && m.r_a_s == 0.5 && trials == 1 &&
                           verdict.kind == SlowDomainVerdict::Kind::Slow;

    const double miss_all_fast = std::pow(0.5, 10);
    std::size_t fast = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SimulatedEndpoint two(probe_namespace({0.5, 0.05}), QuotaConfig{}, make_stream(seed, 1000), 0.03);
        Rng probe_rng = make_stream(seed, 2000);
        const double rc2 = estimate_client_rtt(two, testing);
        const auto v = classify_slow_domain(two, zone, rc2, 0.4, 10, probe_rng);
        fast += v.kind == SlowDomainVerdict::Kind::Fast ? 1 : 0;
    }
    const bool two_ok = 1.0 - miss_all_fast > 0.999 && fast == 100;
    return {single_ok && two_ok,
            fmt("R_c=%.17g R_t=%.17g R_a=%.17g trials=%zu verdict=%s; two-server fast in %zu/100 "
                "(analytic P(fast)=%.6f)",
                rc, m.r_t_s, m.r_a_s, trials, std::string(to_string(verdict.kind)).c_str(), fast,
                1.0 - miss_all_fast)};
}

Outcome oracle_equivalence() {
    Rng rng(20161004);
    std::size_t matched = 0;
    std::size_t events = 0;
    for (int i = 0; i < 50; ++i) {
        const auto s = refsim::random_micro_scenario(rng);
        const auto ref = refsim::reference_run(s);
        const auto eng = refsim::engine_run(s);
        if (ref.finished == eng.finished && ref.late_at == eng.late_at && ref.drop_ages == eng.drop_ages) {
            ++matched;
        }
        events += ref.finished.size() + ref.late_at.size();
    }
    return {matched == 50, fmt("%zu/50 scenarios identical (%zu compared events)", matched, events)};
}

Outcome determinism() {
    const Scenario s = shipped("replication.scn");
    const std::string a = emit_report(replication().report, ReportFormat::Machine);
    const std::string b = emit_report(run_scenario(s), ReportFormat::Machine);
    return {a == b && !a.empty(), fmt("%zu vs %zu bytes, %s", a.size(), b.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 effective timeout and saturating rate", effective_timeout_examples},
        {"2 memory requirement", memory_example},
        {"3 soft quota rule", soft_quota_rule},
        {"4 replication: legit traffic dropped early", replication_outcome},
        {"5 median drop age", median_drop_age},
        {"6 counterfactual: fast attack zone", counterfactual},
        {"7 slow-domain probe", probe_procedure},
        {"8 reference simulator equivalence", oracle_equivalence},
        {"9 deterministic machine report", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
