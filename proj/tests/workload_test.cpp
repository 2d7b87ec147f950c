#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "recursim/resolution_plan.hpp"
#include "recursim/workload.hpp"

using namespace recursim;

namespace {

DomainName N(const char* s) { return DomainName::parse(s); }

AttackProfile flood(double rate, SimTime start, SimTime end, Technique t = RandomQnameTechnique{12, N("attack.test.")}) {
    AttackProfile p;
    p.name = "flood";
    p.rate_qps = rate;
    p.technique = std::move(t);
    p.start_s = start;
    p.end_s = end;
    return p;
}

Namespace base_namespace() {
    Namespace ns;
    ns.add_zone(AuthZone(DomainName::root(), {AuthServer{"r", LatencyModel::constant(0.01)}}));
    ns.add_zone(AuthZone(N("attack.test."), {AuthServer{"a", LatencyModel::constant(0.5)}}, 3600));
    return ns;
}

}  // namespace

TEST(GenerateArrivals, UniformFiveThousandPerSecond) {
    Rng rng(1);
    const auto s = generate_arrivals(flood(5000, 0.0, 1.0), 3, rng);
    ASSERT_EQ(s.arrivals.size(), 5000u);
    EXPECT_TRUE(s.warnings.empty());
    for (std::size_t k = 0; k < s.arrivals.size(); ++k) {
        EXPECT_DOUBLE_EQ(s.arrivals[k].at, static_cast<double>(k) * 0.0002);
        EXPECT_EQ(s.arrivals[k].client, 3u);
    }
}

TEST(GenerateArrivals, UniformOnePerSecond) {
    Rng rng(1);
    LegitProfile p{"user", 1.0, N("www.whois.test."), 0.0, 10.0, ArrivalProcess::Uniform};
    const auto s = generate_arrivals(p, 0, rng);
    ASSERT_EQ(s.arrivals.size(), 10u);
    for (std::size_t k = 0; k < 10; ++k) {
        EXPECT_EQ(s.arrivals[k].at, static_cast<double>(k));
        EXPECT_EQ(s.arrivals[k].query.qname, N("www.whois.test."));
    }
}

TEST(GenerateArrivals, RandomNamesAreDistinct) {
    Rng rng(2);
    const auto s = generate_arrivals(flood(1000, 0.0, 1.0), 0, rng);
    std::set<DomainName> names;
    for (const auto& a : s.arrivals) {
        names.insert(a.query.qname);
        EXPECT_TRUE(a.query.qname.is_at_or_below(N("attack.test.")));
    }
    EXPECT_EQ(names.size(), 1000u);
}

TEST(GenerateArrivals, WindowShorterThanGapWarns) {
    Rng rng(1);
    const auto s = generate_arrivals(flood(1.0, 0.0, 0.5), 0, rng);
    EXPECT_TRUE(s.arrivals.empty());
    EXPECT_EQ(s.warnings.size(), 1u);
}

TEST(GenerateArrivals, RejectsBadProfiles) {
    Rng rng(1);
    EXPECT_THROW(generate_arrivals(flood(0.0, 0.0, 1.0), 0, rng), std::invalid_argument);
    EXPECT_THROW(generate_arrivals(flood(10.0, 2.0, 1.0), 0, rng), std::invalid_argument);
    EXPECT_THROW(generate_arrivals(flood(10.0, 0.0, 1.0, RandomQnameTechnique{64, N("t.")}), 0, rng),
                 std::invalid_argument);
}

TEST(GenerateArrivals, PoissonCountAndDeterminism) {
    auto p = flood(1000, 0.0, 10.0);
    p.process = ArrivalProcess::Poisson;
    Rng a(11);
    Rng b(11);
    const auto sa = generate_arrivals(p, 0, a);
    const auto sb = generate_arrivals(p, 0, b);
    ASSERT_EQ(sa.arrivals.size(), sb.arrivals.size());
    for (std::size_t i = 0; i < sa.arrivals.size(); ++i) {
        EXPECT_EQ(sa.arrivals[i].at, sb.arrivals[i].at);
        EXPECT_EQ(sa.arrivals[i].query, sb.arrivals[i].query);
    }
    // Count ~ Poisson(10000): five standard deviations is 500.
    EXPECT_NEAR(static_cast<double>(sa.arrivals.size()), 10000.0, 500.0);
    for (std::size_t i = 1; i < sa.arrivals.size(); ++i) {
        EXPECT_LT(sa.arrivals[i - 1].at, sa.arrivals[i].at);
    }
    EXPECT_LT(sa.arrivals.back().at, 10.0);
}

TEST(MergeStreams, OrdersByTimeAndKeepsStreamOrderOnTies) {
    const Query qa{N("a."), RType::A};
    const Query qb{N("b."), RType::A};
    std::vector<std::vector<Arrival>> streams = {
        {{0.0, 0, qa}, {1.0, 0, qa}, {2.0, 0, qa}},
        {{0.5, 1, qb}, {1.0, 1, qb}},
    };
    const auto m = merge_streams(streams);
    ASSERT_EQ(m.size(), 5u);
    const std::vector<std::pair<double, ClientId>> expected = {{0.0, 0}, {0.5, 1}, {1.0, 0}, {1.0, 1}, {2.0, 0}};
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_EQ(m[i].at, expected[i].first);
        EXPECT_EQ(m[i].client, expected[i].second);
    }
}

TEST(ProfileCheck, Examples) {
    QuotaConfig q;
    q.recursive_clients = 1000;
    const auto a = validate_profile_against_quota(flood(5000, 0, 1), q, 0.5);
    EXPECT_TRUE(a.ok);
    EXPECT_DOUBLE_EQ(a.needed_service_time_s, 0.2);
    const auto b = validate_profile_against_quota(flood(1000, 0, 1), q, 0.5);
    EXPECT_FALSE(b.ok);
    EXPECT_DOUBLE_EQ(b.needed_service_time_s, 1.0);
    const auto c = validate_profile_against_quota(flood(100, 0, 1), q, 10.0);
    EXPECT_TRUE(c.ok);
    EXPECT_DOUBLE_EQ(c.needed_service_time_s, 10.0);
}

TEST(InstallTechnique, CnameChainBuildsZeroTtlChain) {
    Namespace ns = base_namespace();
    const auto p = flood(10, 0, 1, CnameChainTechnique{3, N("attack.test.")});
    install_technique(p, ns);
    ns.validate();
    RecordCache cache;
    cache.insert(ns.zone(N("attack.test.")).ns_record(), 0.0);
    const auto plan = std::get<ResolutionPlan>(resolution_plan(ns, cache, sample_qname(p), RType::A, 0.0));
    EXPECT_EQ(plan.steps.size(), 4u);
    EXPECT_EQ(plan.rcode, Rcode::NoError);
}

TEST(InstallTechnique, DeepLabelsAddsZoneCuts) {
    Namespace ns = base_namespace();
    const auto p = flood(10, 0, 1, DeepLabelsTechnique{3, N("attack.test.")});
    install_technique(p, ns);
    ns.validate();
    RecordCache cache;
    cache.insert(ns.zone(N("attack.test.")).ns_record(), 0.0);
    const auto plan = std::get<ResolutionPlan>(resolution_plan(ns, cache, sample_qname(p), RType::A, 0.0));
    EXPECT_EQ(plan.steps.size(), 4u);  // three referrals plus the final lookup
    Rng rng(1);
    const auto s = generate_arrivals(p, 0, rng);
    EXPECT_EQ(s.arrivals[0].query.qname.label_count(), 6u);
}

TEST(InstallTechnique, ZeroTtlTarget) {
    Namespace ns = base_namespace();
    const auto p = flood(10, 0, 1, ZeroTtlTechnique{N("z.attack.test.")});
    install_technique(p, ns);
    const ResourceRecord* r = ns.zone(N("attack.test.")).find(N("z.attack.test."), RType::A);
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->ttl_s, 0u);
}

TEST(InstallTechnique, MissingZoneIsAnError) {
    Namespace ns = base_namespace();
    EXPECT_THROW(install_technique(flood(10, 0, 1, SlowDomainTechnique{N("nope.test.")}), ns),
                 std::invalid_argument);
    EXPECT_THROW(install_technique(flood(10, 0, 1, CnameChainTechnique{2, N("nope.test.")}), ns),
                 std::invalid_argument);
}

TEST(EndToEnd, RandomQnamesNeverHitTheCache) {
    Namespace ns = base_namespace();
    QuotaConfig q;
    q.recursive_clients = 1000;
    EngineOptions o;
    o.quota = q;
    Rng rng(5);
    const auto s = generate_arrivals(flood(2000, 0, 2), 0, rng);
    ResolverEngine e(ns, Rng(6), o);
    const auto r = e.run(s.arrivals, 2.0);
    EXPECT_EQ(r.total.injected, 4000u);
    EXPECT_EQ(r.total.answered_from_cache, 0u);
}
