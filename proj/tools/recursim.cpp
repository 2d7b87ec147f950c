// recursim: command-line front end for the recursion-quota simulator.
//
//   recursim run <scenario> [--format human|machine] [--out FILE]
//   recursim calc --recursive-clients N [--rate Q] [--timeout T] [--per-client-memory U]
//   recursim probe <scenario> --zone NAME [--format human|machine]
//
// Exit codes: 0 success, 2 scenario validation error, 3 invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "recursim/quota_math.hpp"
#include "recursim/report.hpp"
#include "recursim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInvariant = 3;

recursim::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw recursim::ScenarioError({{0, "cannot open scenario file " + path}});
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return recursim::parse_scenario(buf.str());
}

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "recursim: cannot write " << out_path << '\n';
        return kExitUsage;
    }
    out << text;
    return kExitOk;
}

recursim::ReportFormat parse_format(const std::string& f) {
    return f == "machine" ? recursim::ReportFormat::Machine : recursim::ReportFormat::Human;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive resolver quota / timeout simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string format = "human";
    std::string out_path;
    auto* run = app.add_subcommand("run", "Simulate a scenario file and print its report");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--format", format, "human or machine")
        ->check(CLI::IsMember({"human", "machine"}));
    run->add_option("--out", out_path, "Write the report to FILE instead of stdout");

    std::uint64_t recursive_clients = recursim::QuotaConfig::kDefaultRecursiveClients;
    std::optional<double> rate;
    std::optional<double> timeout;
    std::optional<std::string> memory;
    auto* calc = app.add_subcommand("calc", "Closed-form quota, timeout and memory figures");
    calc->add_option("--recursive-clients", recursive_clients, "Hard quota L")->required();
    calc->add_option("--rate", rate, "Inbound query rate Q in qps");
    calc->add_option("--timeout", timeout, "Recursion timeout T in seconds");
    calc->add_option("--per-client-memory", memory, "Bytes per pending recursion (k/M/G)");

    std::string probe_zone;
    auto* probe = app.add_subcommand("probe", "Run the slow-domain probe plans of a scenario");
    probe->add_option("scenario", scenario_path, "Scenario file")->required();
    probe->add_option("--zone", probe_zone, "Candidate zone to probe")->required();
    probe->add_option("--format", format, "human or machine")
        ->check(CLI::IsMember({"human", "machine"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) {
            const recursim::Scenario scenario = load_scenario(scenario_path);
            const recursim::RunReport report = recursim::run_scenario(scenario);
            return write_output(recursim::emit_report(report, parse_format(format)), out_path);
        }
        if (*calc) {
            std::ostringstream out;
            auto fmt = recursim::format_double;
            out << "recursive_clients: " << recursive_clients << '\n'
                << "soft_quota: " << recursim::soft_quota(recursive_clients) << '\n';
            if (rate) {
                out << "rate_qps: " << fmt(*rate) << '\n'
                    << "effective_timeout_s: "
                    << fmt(recursim::effective_timeout(recursive_clients, *rate)) << '\n'
                    << "min_service_time_s: "
                    << fmt(recursim::min_service_time(recursive_clients, *rate)) << '\n'
                    << "soft_effective_timeout_s: "
                    << fmt(recursim::effective_timeout(recursim::soft_quota(recursive_clients),
                                                       *rate))
                    << '\n';
            }
            if (timeout) {
                out << "timeout_s: " << fmt(*timeout) << '\n'
                    << "saturating_query_rate_qps: "
                    << fmt(recursim::saturating_query_rate(recursive_clients, *timeout)) << '\n';
            }
            if (memory) {
                const auto per_client = recursim::parse_byte_count(*memory);
                out << "per_client_memory_bytes: " << per_client << '\n'
                    << "memory_bytes: "
                    << recursim::memory_requirement(recursive_clients, per_client).total_bytes
                    << '\n';
            }
            std::cout << out.str();
            return kExitOk;
        }
        if (*probe) {
            const recursim::Scenario scenario = load_scenario(scenario_path);
            const auto zone = recursim::DomainName::parse(probe_zone);
            recursim::RunReport report;
            report.scenario_digest = recursim::scenario_digest(scenario);
            report.seed = scenario.seed;
            report.horizon_s = scenario.horizon_s;
            report.sampling_interval_s = scenario.sampling_interval_s;
            report.analytic = recursim::analytic_block(scenario.quota, std::nullopt);
            report.probes = recursim::run_probes(scenario, &zone);
            if (report.probes.empty()) {
                std::cerr << "recursim: no [probe] plan for zone " << zone.to_string() << '\n';
                return kExitInvalid;
            }
            std::cout << recursim::emit_report(report, parse_format(format));
            return kExitOk;
        }
    } catch (const recursim::ScenarioError& e) {
        std::cerr << "recursim: invalid scenario\n" << e.what() << '\n';
        return kExitInvalid;
    } catch (const recursim::InvariantViolation& e) {
        std::cerr << "recursim: invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::domain_error& e) {
        std::cerr << "recursim: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "recursim: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitUsage;
}
