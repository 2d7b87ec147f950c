#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "recursim/scenario.hpp"

using namespace recursim;

namespace {

DomainName N(const char* s) { return DomainName::parse(s); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<ScenarioIssue> issues_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<ScenarioIssue>& issues, const std::string& needle, std::size_t line = 0) {
    for (const auto& i : issues) {
        if (i.message.find(needle) != std::string::npos && (line == 0 || i.line == line)) return true;
    }
    return false;
}

const char* kMinimal =
    "[quota]\n"
    "recursive_clients = 1000\n"
    "[run]\n"
    "seed = 1\n"
    "horizon_s = 1\n";

}  // namespace

TEST(ParseScenario, MinimalFileUsesDefaults) {
    const Scenario s = parse_scenario(kMinimal);
    EXPECT_EQ(s.quota.recursive_clients, 1000u);
    EXPECT_EQ(s.quota.configured_timeout_s, 10.0);
    EXPECT_EQ(s.quota.per_client_memory_bytes, 20000u);
    EXPECT_TRUE(s.drop_on_reject);
    EXPECT_EQ(s.sampling_interval_s, 0.1);
    EXPECT_FALSE(s.warmup_s);
    EXPECT_TRUE(s.attack_profiles.empty());
    EXPECT_TRUE(s.name_space.zones().empty());
    EXPECT_EQ(s.seed, 1u);
    EXPECT_EQ(s.horizon_s, 1.0);
}

TEST(ParseScenario, UndeclaredZoneIsNamed) {
    const auto issues = issues_of(read_file(RECURSIM_TEST_DATA "/invalid.scn"));
    ASSERT_FALSE(issues.empty());
    EXPECT_TRUE(mentions(issues, "slow.test.", 10));
}

TEST(ParseScenario, DuplicateQuotaSection) {
    const auto issues = issues_of(std::string(kMinimal) + "[quota]\nrecursive_clients = 5\n");
    EXPECT_TRUE(mentions(issues, "duplicate [quota]", 6));
}

TEST(ParseScenario, UnknownKeyWithLine) {
    const auto issues = issues_of("[quota]\nrecursive_clients = 10\nfrobnicate = 3\n[run]\nseed = 1\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "unknown key 'frobnicate'", 3));
}

TEST(ParseScenario, DuplicateKey) {
    const auto issues = issues_of("[quota]\nrecursive_clients = 10\nrecursive_clients = 11\n[run]\nseed = 1\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "duplicate key", 3));
}

TEST(ParseScenario, MissingSeed) {
    const auto issues = issues_of("[run]\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "missing seed", 1));
}

TEST(ParseScenario, CollectsEveryIssue) {
    const auto issues = issues_of("[quota]\nrecursive_clients = zero\ntimeout_s = -1\n[run]\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "recursive_clients", 2));
    EXPECT_TRUE(mentions(issues, "timeout_s", 3));
    EXPECT_TRUE(mentions(issues, "missing seed", 4));
}

TEST(ParseScenario, ProfilesNeedRootZone) {
    const auto issues = issues_of(
        "[zone example.]\nserver = a 0.1\n[legit u]\nrate_qps = 1\nqname = www.example.\n[run]\nseed = 1\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "root zone"));
}

TEST(ParseScenario, ServersRecordsAndProfiles) {
    const Scenario s = parse_scenario(
        "[zone .]\nserver = r 0.01\n"
        "[zone example.]\nns_ttl = 60\nserver = a 0.1\nserver = b 0.2..0.4\n"
        "record = www.example. A 300 192.0.2.1\n"
        "record = alias.example. CNAME 0 www.example.\n"
        "[attack f]\nrate_qps = 10\ntechnique = cname_chain\nzone = example.\nchain_len = 2\nend_s = 3\n"
        "[legit u]\nrate_qps = 2\nqname = www.example.\narrivals = poisson\n"
        "[run]\nseed = 9\nhorizon_s = 5\nwarmup_s = 0.5\n");
    const AuthZone& z = s.name_space.zone(N("example."));
    ASSERT_EQ(z.servers().size(), 2u);
    EXPECT_EQ(z.servers()[1].latency.kind, LatencyModel::Kind::Uniform);
    EXPECT_EQ(z.servers()[1].latency.max_s, 0.4);
    EXPECT_EQ(z.ns_ttl(), 60u);
    ASSERT_NE(z.find(N("alias.example."), RType::CNAME), nullptr);
    ASSERT_EQ(s.attack_profiles.size(), 1u);
    EXPECT_EQ(s.attack_profiles[0].end_s, 3.0);
    EXPECT_EQ(std::get<CnameChainTechnique>(s.attack_profiles[0].technique).chain_len, 2u);
    ASSERT_EQ(s.legit_profiles.size(), 1u);
    EXPECT_EQ(s.legit_profiles[0].end_s, 5.0);  // defaults to the horizon
    EXPECT_EQ(s.legit_profiles[0].process, ArrivalProcess::Poisson);
    EXPECT_EQ(s.warmup_s, 0.5);
}

TEST(ParseScenario, ProbeTrialsMustCoverServers) {
    const auto issues = issues_of(
        "[zone .]\nserver = r 0.01\n[zone example.]\nserver = a 0.1\nrecord = www.example. A 300 192.0.2.1\n"
        "[zone m.test.]\nserver = a 0.5\nserver = b 0.05\n"
        "[probe p]\nzone = m.test.\ntesting_name = www.example.\nmin_delay_s = 0.4\ntrials = 1\n"
        "[run]\nseed = 1\nhorizon_s = 1\n");
    EXPECT_TRUE(mentions(issues, "trials"));
}

TEST(ParseScenario, RoundTripsShippedScenarios) {
    for (const char* name : {"replication.scn", "counterfactual.scn", "probe.scn"}) {
        const Scenario s = parse_scenario(read_file(std::string(RECURSIM_SCENARIO_DIR "/") + name));
        const std::string text = serialize_scenario(s);
        const Scenario again = parse_scenario(text);
        EXPECT_EQ(s, again) << name;
        EXPECT_EQ(text, serialize_scenario(again)) << name;
    }
}

TEST(ParseScenario, RoundTripsAwkwardDoubles) {
    Scenario s = parse_scenario(
        "[zone .]\nserver = r 0.1\n"
        "[zone t.]\nserver = a 0.30000000000000004\n"
        "[attack f]\nrate_qps = 3333.333333333333\ntechnique = deep_labels\nzone = t.\ndepth = 2\nstart_s = 0.1\n"
        "[run]\nseed = 18446744073709551615\nhorizon_s = 0.7\nsampling_interval_s = 0.05\n");
    EXPECT_EQ(s.seed, 18446744073709551615ull);
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
}

TEST(ParseByteCount, Suffixes) {
    EXPECT_EQ(parse_byte_count("20000"), 20000u);
    EXPECT_EQ(parse_byte_count("20k"), 20000u);
    EXPECT_EQ(parse_byte_count("3M"), 3000000u);
    EXPECT_EQ(parse_byte_count("2G"), 2000000000u);
    EXPECT_THROW(parse_byte_count("12x"), std::invalid_argument);
    EXPECT_THROW(parse_byte_count(""), std::invalid_argument);
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(30.0), "30");
    EXPECT_EQ(format_double(0.1 + 0.2), "0.30000000000000004");
}
