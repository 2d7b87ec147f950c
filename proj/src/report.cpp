#include "recursim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "recursim/quota_math.hpp"
#include "recursim/resolution_plan.hpp"
#include "recursim/workload.hpp"

namespace recursim {

namespace {

constexpr double kProbeConfidence = 0.99;

Namespace prepared_namespace(const Scenario& scenario) {
    Namespace ns = scenario.name_space;
    std::vector<ScenarioIssue> issues;
    for (const auto& p : scenario.attack_profiles) {
        try {
            install_technique(p, ns);
        } catch (const std::invalid_argument& e) {
            issues.push_back(ScenarioIssue{0, e.what()});
        }
    }
    if (!issues.empty()) {
        throw ScenarioError(std::move(issues));
    }
    return ns;
}

double default_warmup(const AnalyticBlock& analytic, double interval) {
    if (!analytic.effective_timeout_s) {
        return 0.0;
    }
    // L / Q rounded up to the next sampling point.
    return std::ceil(*analytic.effective_timeout_s / interval - 1e-9) * interval;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

AnalyticBlock analytic_block(const QuotaConfig& quota, std::optional<double> attack_rate_qps) {
    AnalyticBlock a;
    a.recursive_clients = quota.recursive_clients;
    a.soft_quota = soft_quota(quota.recursive_clients);
    a.configured_timeout_s = quota.configured_timeout_s;
    a.per_client_memory_bytes = quota.per_client_memory_bytes;
    a.memory_bytes =
        memory_requirement(quota.recursive_clients, quota.per_client_memory_bytes).total_bytes;
    a.saturating_query_rate_qps =
        saturating_query_rate(quota.recursive_clients, quota.configured_timeout_s);
    if (attack_rate_qps && *attack_rate_qps > 0.0) {
        a.attack_rate_qps = *attack_rate_qps;
        a.effective_timeout_s = effective_timeout(quota.recursive_clients, *attack_rate_qps);
        a.min_service_time_s = min_service_time(quota.recursive_clients, *attack_rate_qps);
        a.soft_effective_timeout_s = static_cast<double>(a.soft_quota) / *attack_rate_qps;
    }
    return a;
}

double nearest_rank(std::vector<double> values, double q) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

DropAgeSummary summarize_drop_ages(const std::vector<double>& ages) {
    DropAgeSummary s;
    s.count = ages.size();
    if (ages.empty()) {
        return s;
    }
    s.min_s = *std::min_element(ages.begin(), ages.end());
    s.median_s = nearest_rank(ages, 0.5);
    s.p95_s = nearest_rank(ages, 0.95);
    return s;
}

std::string scenario_digest(const Scenario& scenario) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_scenario(scenario)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

std::vector<ProbeReport> run_probes(const Scenario& scenario, const DomainName* zone) {
    const Namespace ns = prepared_namespace(scenario);
    std::vector<ProbeReport> reports;
    for (std::size_t i = 0; i < scenario.probe_plans.size(); ++i) {
        const ProbePlan& plan = scenario.probe_plans[i];
        if (zone != nullptr && plan.zone != *zone) {
            continue;
        }
        const std::size_t trials =
            plan.n_trials.value_or(recommended_trials(ns.zone(plan.zone).servers().size(),
                                                      kProbeConfidence));
        SimulatedEndpoint endpoint(ns, scenario.quota, make_stream(scenario.seed, 1000 + i),
                                   plan.client_link_s, plan.jitter_s);
        Rng rng = make_stream(scenario.seed, 2000 + i);
        reports.push_back(
            run_probe(endpoint, plan.testing_name, plan.zone, plan.min_delay_s, trials, rng));
    }
    return reports;
}

RunReport run_scenario(const Scenario& scenario) {
    RunReport report;
    report.scenario_digest = scenario_digest(scenario);
    report.seed = scenario.seed;
    report.horizon_s = scenario.horizon_s;
    report.sampling_interval_s = scenario.sampling_interval_s;

    std::optional<double> attack_rate;
    for (const auto& p : scenario.attack_profiles) {
        attack_rate = attack_rate.value_or(0.0) + p.rate_qps;
    }
    report.analytic = analytic_block(scenario.quota, attack_rate);
    report.warmup_s =
        scenario.warmup_s.value_or(default_warmup(report.analytic, scenario.sampling_interval_s));

    const Namespace ns = prepared_namespace(scenario);
    const std::size_t n_attack = scenario.attack_profiles.size();
    const std::size_t n_profiles = n_attack + scenario.legit_profiles.size();

    if (n_profiles > 0) {
        report.simulated = true;
        std::vector<std::vector<Arrival>> streams;
        for (std::size_t i = 0; i < n_profiles; ++i) {
            Rng rng = make_stream(scenario.seed, 100 + i);
            const auto client = static_cast<ClientId>(i);
            ArrivalStream s = i < n_attack
                                  ? generate_arrivals(scenario.attack_profiles[i], client, rng)
                                  : generate_arrivals(scenario.legit_profiles[i - n_attack], client, rng);
            report.warnings.insert(report.warnings.end(), s.warnings.begin(), s.warnings.end());
            streams.push_back(std::move(s.arrivals));
        }
        const std::vector<Arrival> arrivals = merge_streams(streams);

        EngineOptions options;
        options.quota = scenario.quota;
        options.drop_on_reject = scenario.drop_on_reject;
        options.sampling_interval_s = scenario.sampling_interval_s;
        ResolverEngine engine(ns, make_stream(scenario.seed, 1), options);
        RunResult result = engine.run(arrivals, scenario.horizon_s);

        std::vector<WindowCounts> windows(n_profiles);
        for (const auto& o : result.outcomes) {
            if (o.arrived_at < report.warmup_s) {
                continue;
            }
            WindowCounts& w = windows[o.client];
            ++w.injected;
            if (o.disposition == Disposition::Answered) {
                ++w.answered;
            } else {
                ++w.servfail;
            }
            if (o.disposition == Disposition::ServfailDroppedEarly) {
                ++w.dropped_early;
            }
        }

        for (std::size_t i = 0; i < n_profiles; ++i) {
            ProfileReport pr;
            if (i < n_attack) {
                const AttackProfile& p = scenario.attack_profiles[i];
                pr.name = p.name;
                pr.kind = "attack";
                pr.technique = std::string(technique_name(p.technique));
                pr.rate_qps = p.rate_qps;
                pr.expected_service_time_s = expected_service_time(ns, sample_qname(p), RType::A);
                pr.sufficiency =
                    validate_profile_against_quota(p, scenario.quota, *pr.expected_service_time_s);
            } else {
                const LegitProfile& p = scenario.legit_profiles[i - n_attack];
                pr.name = p.name;
                pr.kind = "legit";
                pr.rate_qps = p.rate_qps;
            }
            if (auto it = result.per_client.find(static_cast<ClientId>(i));
                it != result.per_client.end()) {
                pr.counters = it->second;
            }
            if (!pr.counters.service_times_s.empty()) {
                pr.service_time_median_s = nearest_rank(pr.counters.service_times_s, 0.5);
            }
            pr.post_warmup = windows[i];
            report.profiles.push_back(std::move(pr));
        }
        report.total = std::move(result.total);
        report.pending_series = std::move(result.pending_series);
        report.drop_ages = summarize_drop_ages(result.drop_ages_s);
    }

    report.probes = run_probes(scenario);
    return report;
}

namespace {

void emit_machine(const RunReport& r, std::ostream& out) {
    auto kv = [&](const std::string& key, const std::string& value) {
        out << key << ": " << value << '\n';
    };
    auto num = [](double v) { return format_double(v); };
    auto counters = [&](const std::string& prefix, const OutcomeCounters& c) {
        kv(prefix + ".injected", std::to_string(c.injected));
        kv(prefix + ".answered", std::to_string(c.answered));
        kv(prefix + ".answered_from_cache", std::to_string(c.answered_from_cache));
        kv(prefix + ".answered_nxdomain", std::to_string(c.answered_nxdomain));
        kv(prefix + ".servfail_timeout", std::to_string(c.servfail_timeout));
        kv(prefix + ".servfail_dropped_early", std::to_string(c.servfail_dropped_early));
        kv(prefix + ".rejected_at_admission", std::to_string(c.rejected_at_admission));
        kv(prefix + ".late_responses_discarded", std::to_string(c.late_responses_discarded));
    };

    kv("report_format", "1");
    kv("scenario_digest", r.scenario_digest);
    kv("seed", std::to_string(r.seed));
    kv("horizon_s", num(r.horizon_s));
    kv("sampling_interval_s", num(r.sampling_interval_s));
    kv("warmup_s", num(r.warmup_s));

    const AnalyticBlock& a = r.analytic;
    kv("analytic.recursive_clients", std::to_string(a.recursive_clients));
    kv("analytic.soft_quota", std::to_string(a.soft_quota));
    kv("analytic.configured_timeout_s", num(a.configured_timeout_s));
    kv("analytic.per_client_memory_bytes", std::to_string(a.per_client_memory_bytes));
    kv("analytic.memory_bytes", std::to_string(a.memory_bytes));
    kv("analytic.saturating_query_rate_qps", num(a.saturating_query_rate_qps));
    if (a.attack_rate_qps) {
        kv("analytic.attack_rate_qps", num(*a.attack_rate_qps));
        kv("analytic.effective_timeout_s", num(*a.effective_timeout_s));
        kv("analytic.min_service_time_s", num(*a.min_service_time_s));
        kv("analytic.soft_effective_timeout_s", num(*a.soft_effective_timeout_s));
    }

    kv("simulated", yes_no(r.simulated));
    if (r.simulated) {
        for (const auto& p : r.profiles) {
            const std::string prefix = "profile." + p.name;
            kv(prefix + ".kind", p.kind);
            if (!p.technique.empty()) {
                kv(prefix + ".technique", p.technique);
            }
            kv(prefix + ".rate_qps", num(p.rate_qps));
            if (p.expected_service_time_s) {
                kv(prefix + ".expected_service_time_s", num(*p.expected_service_time_s));
                kv(prefix + ".needed_service_time_s", num(p.sufficiency->needed_service_time_s));
                kv(prefix + ".sufficient", yes_no(p.sufficiency->ok));
            }
            counters(prefix, p.counters);
            if (p.service_time_median_s) {
                kv(prefix + ".service_time_median_s", num(*p.service_time_median_s));
            }
            const WindowCounts& w = p.post_warmup;
            kv(prefix + ".post_warmup.injected", std::to_string(w.injected));
            kv(prefix + ".post_warmup.answered", std::to_string(w.answered));
            kv(prefix + ".post_warmup.servfail", std::to_string(w.servfail));
            kv(prefix + ".post_warmup.dropped_early", std::to_string(w.dropped_early));
            kv(prefix + ".post_warmup.answered_rate", num(w.rate(w.answered)));
            kv(prefix + ".post_warmup.servfail_rate", num(w.rate(w.servfail)));
            kv(prefix + ".post_warmup.dropped_early_rate", num(w.rate(w.dropped_early)));
        }
        counters("total", r.total);
        kv("drop_age.count", std::to_string(r.drop_ages.count));
        kv("drop_age.min_s", num(r.drop_ages.min_s));
        kv("drop_age.median_s", num(r.drop_ages.median_s));
        kv("drop_age.p95_s", num(r.drop_ages.p95_s));
        std::size_t peak = 0;
        std::string series;
        for (std::size_t v : r.pending_series) {
            peak = std::max(peak, v);
            if (!series.empty()) series += ',';
            series += std::to_string(v);
        }
        kv("pending.max_sampled", std::to_string(peak));
        kv("pending.series", series);
    }

    for (std::size_t i = 0; i < r.probes.size(); ++i) {
        const ProbeReport& p = r.probes[i];
        const std::string prefix = "probe." + std::to_string(i);
        kv(prefix + ".zone", p.zone.to_string());
        kv(prefix + ".testing_name", p.testing_name.to_string());
        kv(prefix + ".min_delay_s", num(p.min_delay_s));
        kv(prefix + ".trials", std::to_string(p.n_trials));
        if (p.r_c_s) {
            kv(prefix + ".r_c_s", num(*p.r_c_s));
        }
        kv(prefix + ".verdict", std::string(to_string(p.verdict.kind)));
        if (!p.verdict.reason.empty()) {
            kv(prefix + ".reason", p.verdict.reason);
        }
        if (p.verdict.evidence) {
            kv(prefix + ".evidence_trial", std::to_string(*p.verdict.evidence));
        }
        for (const auto& m : p.verdict.trials) {
            const std::string t = prefix + ".trial." + std::to_string(m.trial_index);
            kv(t + ".r_t_s", num(m.r_t_s));
            kv(t + ".r_a_s", num(m.r_a_s));
            kv(t + ".valid", yes_no(m.valid));
            if (m.server) {
                kv(t + ".server", *m.server);
            }
        }
    }
    for (std::size_t i = 0; i < r.warnings.size(); ++i) {
        kv("warning." + std::to_string(i), r.warnings[i]);
    }
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
    return buf;
}

void emit_human(const RunReport& r, std::ostream& out) {
    const AnalyticBlock& a = r.analytic;
    out << "scenario " << r.scenario_digest << "  seed " << r.seed << '\n' << '\n';
    out << "quota\n";
    out << "  recursive-clients (hard)   " << a.recursive_clients << '\n';
    out << "  soft quota                 " << a.soft_quota << '\n';
    out << "  configured timeout         " << short_num(a.configured_timeout_s) << " s\n";
    out << "  saturating rate L/T        " << short_num(a.saturating_query_rate_qps)
        << " qps\n";
    out << "  memory L*U                 " << a.memory_bytes << " bytes\n";
    if (a.attack_rate_qps) {
        out << "  attack rate Q              " << short_num(*a.attack_rate_qps) << " qps\n";
        out << "  effective timeout L/Q      " << short_num(*a.effective_timeout_s) << " s\n";
        out << "  soft-quota timeout S/Q     " << short_num(*a.soft_effective_timeout_s)
            << " s\n";
    }
    if (r.simulated) {
        out << "\nsimulation  horizon " << short_num(r.horizon_s) << " s, warm-up "
            << short_num(r.warmup_s) << " s\n";
        char line[256];
        std::snprintf(line, sizeof line, "  %-16s %-7s %9s %9s %9s %9s %9s %9s %10s\n", "profile",
                      "kind", "queries", "answered", "timeout", "dropped", "rejected", "late",
                      "servfail*");
        out << line;
        for (const auto& p : r.profiles) {
            const auto& c = p.counters;
            std::snprintf(line, sizeof line,
                          "  %-16s %-7s %9llu %9llu %9llu %9llu %9llu %9llu %10s\n",
                          p.name.c_str(), p.kind.c_str(),
                          static_cast<unsigned long long>(c.injected),
                          static_cast<unsigned long long>(c.answered),
                          static_cast<unsigned long long>(c.servfail_timeout),
                          static_cast<unsigned long long>(c.servfail_dropped_early),
                          static_cast<unsigned long long>(c.rejected_at_admission),
                          static_cast<unsigned long long>(c.late_responses_discarded),
                          pct(p.post_warmup.rate(p.post_warmup.servfail)).c_str());
            out << line;
        }
        out << "  (* SERVFAIL share of queries arriving after warm-up)\n";
        for (const auto& p : r.profiles) {
            if (p.sufficiency) {
                out << "  " << p.name << ": expected service time "
                    << short_num(*p.expected_service_time_s) << " s, needs "
                    << short_num(p.sufficiency->needed_service_time_s) << " s -> "
                    << (p.sufficiency->ok ? "sufficient" : "insufficient") << '\n';
            }
        }
        out << "\ndrop age  n=" << r.drop_ages.count << "  min " << short_num(r.drop_ages.min_s)
            << " s  median " << short_num(r.drop_ages.median_s) << " s  p95 "
            << short_num(r.drop_ages.p95_s) << " s\n";
    }
    for (const auto& p : r.probes) {
        out << "\nprobe " << p.zone.to_string() << "  threshold " << short_num(p.min_delay_s)
            << " s, " << p.n_trials << " trials\n";
        if (p.r_c_s) {
            out << "  R_c " << short_num(*p.r_c_s) << " s\n";
        }
        for (const auto& m : p.verdict.trials) {
            out << "  trial " << m.trial_index << "  R_t " << short_num(m.r_t_s) << " s  R_a "
                << short_num(m.r_a_s) << " s" << (m.server ? "  via " + *m.server : "")
                << (m.valid ? "" : "  INVALID") << '\n';
        }
        out << "  verdict: " << to_string(p.verdict.kind);
        if (!p.verdict.reason.empty()) {
            out << " (" << p.verdict.reason << ")";
        }
        out << '\n';
    }
    for (const auto& w : r.warnings) {
        out << "warning: " << w << '\n';
    }
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Machine) {
        emit_machine(report, out);
    } else {
        emit_human(report, out);
    }
    return out.str();
}

}  // namespace recursim
