#include "recursim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace recursim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string kind;
    std::string arg;
    std::size_t line = 0;
    std::vector<Entry> entries;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Scenario parse();

private:
    void error(std::size_t line, std::string message) {
        issues_.push_back(ScenarioIssue{line, std::move(message)});
    }

    std::vector<Section> tokenize();

    // Value readers record an issue and return nullopt on failure.
    std::optional<double> real(const Entry& e);
    std::optional<std::uint64_t> integer(const Entry& e);
    std::optional<bool> boolean(const Entry& e);
    std::optional<DomainName> name(const Entry& e);
    std::optional<std::size_t> count(const Entry& e) {
        auto v = integer(e);
        return v ? std::optional<std::size_t>(static_cast<std::size_t>(*v)) : std::nullopt;
    }

    // Returns the entries keyed by name, flagging unknown and repeated keys.
    std::map<std::string, const Entry*> index(const Section& s,
                                              std::initializer_list<std::string_view> keys,
                                              std::initializer_list<std::string_view> repeatable = {});

    void build_quota(const Section& s, Scenario& out);
    void build_run(const Section& s, Scenario& out);
    void build_zone(const Section& s, Scenario& out);
    void build_attack(const Section& s, Scenario& out);
    void build_legit(const Section& s, Scenario& out);
    void build_probe(const Section& s, Scenario& out);
    void cross_check(Scenario& out);

    std::string_view text_;
    std::vector<ScenarioIssue> issues_;
    std::set<std::string> profile_names_;
    // Lines where references were made, for error locations.
    std::vector<std::pair<DomainName, std::size_t>> zone_refs_;
    std::vector<std::size_t> probe_lines_;
    std::vector<std::optional<double>> pending_end_;  // attack then legit, unresolved end_s
};

std::vector<Section> Parser::tokenize() {
    std::vector<Section> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
        const auto nl = text_.find('\n', pos);
        std::string_view line =
            text_.substr(pos, nl == std::string_view::npos ? text_.npos : nl - pos);
        pos = nl == std::string_view::npos ? text_.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                error(line_no, "unterminated section header");
                continue;
            }
            const auto words = split_ws(line.substr(1, line.size() - 2));
            if (words.empty() || words.size() > 2) {
                error(line_no, "malformed section header");
                continue;
            }
            Section s;
            s.kind = std::string(words[0]);
            s.arg = words.size() > 1 ? std::string(words[1]) : std::string();
            s.line = line_no;
            sections.push_back(std::move(s));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            error(line_no, "expected key = value");
            continue;
        }
        if (sections.empty()) {
            error(line_no, "key outside of any section");
            continue;
        }
        Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                line_no};
        if (e.key.empty() || e.value.empty()) {
            error(line_no, "empty key or value");
            continue;
        }
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

std::optional<double> Parser::real(const Entry& e) {
    double v = 0.0;
    const auto* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        error(e.line, e.key + ": expected a number, got '" + e.value + "'");
        return std::nullopt;
    }
    return v;
}

std::optional<std::uint64_t> Parser::integer(const Entry& e) {
    std::uint64_t v = 0;
    const auto* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        error(e.line, e.key + ": expected a non-negative integer, got '" + e.value + "'");
        return std::nullopt;
    }
    return v;
}

std::optional<bool> Parser::boolean(const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    error(e.line, e.key + ": expected true or false");
    return std::nullopt;
}

std::optional<DomainName> Parser::name(const Entry& e) {
    try {
        return DomainName::parse(e.value);
    } catch (const std::exception& ex) {
        error(e.line, e.key + ": " + ex.what());
        return std::nullopt;
    }
}

std::map<std::string, const Entry*> Parser::index(
    const Section& s, std::initializer_list<std::string_view> keys,
    std::initializer_list<std::string_view> repeatable) {
    std::map<std::string, const Entry*> out;
    for (const auto& e : s.entries) {
        const bool known = std::find(keys.begin(), keys.end(), e.key) != keys.end();
        const bool repeats = std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end();
        if (!known && !repeats) {
            error(e.line, "unknown key '" + e.key + "' in [" + s.kind + "]");
            continue;
        }
        if (repeats) {
            continue;
        }
        if (!out.emplace(e.key, &e).second) {
            error(e.line, "duplicate key '" + e.key + "' in [" + s.kind + "]");
        }
    }
    return out;
}

void Parser::build_quota(const Section& s, Scenario& out) {
    auto keys = index(s, {"recursive_clients", "timeout_s", "per_client_memory",
                          "validate_bind_range", "drop_on_reject"});
    if (auto it = keys.find("recursive_clients"); it != keys.end()) {
        if (auto v = integer(*it->second)) {
            if (*v < 1) error(it->second->line, "recursive_clients must be >= 1");
            out.quota.recursive_clients = *v;
        }
    }
    if (auto it = keys.find("timeout_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (!(*v > 0.0)) error(it->second->line, "timeout_s must be positive");
            out.quota.configured_timeout_s = *v;
        }
    }
    if (auto it = keys.find("per_client_memory"); it != keys.end()) {
        try {
            out.quota.per_client_memory_bytes = parse_byte_count(it->second->value);
        } catch (const std::exception& ex) {
            error(it->second->line, std::string("per_client_memory: ") + ex.what());
        }
    }
    if (auto it = keys.find("validate_bind_range"); it != keys.end()) {
        if (auto v = boolean(*it->second)) out.validate_bind_range = *v;
    }
    if (auto it = keys.find("drop_on_reject"); it != keys.end()) {
        if (auto v = boolean(*it->second)) out.drop_on_reject = *v;
    }
    if (out.validate_bind_range) {
        try {
            out.quota.validate(true);
        } catch (const std::exception& ex) {
            error(s.line, ex.what());
        }
    }
}

void Parser::build_run(const Section& s, Scenario& out) {
    auto keys = index(s, {"seed", "horizon_s", "sampling_interval_s", "warmup_s"});
    if (auto it = keys.find("seed"); it != keys.end()) {
        if (auto v = integer(*it->second)) out.seed = *v;
    } else {
        error(s.line, "[run] is missing seed");
    }
    if (auto it = keys.find("horizon_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (!(*v > 0.0)) error(it->second->line, "horizon_s must be positive");
            out.horizon_s = *v;
        }
    } else {
        error(s.line, "[run] is missing horizon_s");
    }
    if (auto it = keys.find("sampling_interval_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (!(*v > 0.0)) error(it->second->line, "sampling_interval_s must be positive");
            out.sampling_interval_s = *v;
        }
    }
    if (auto it = keys.find("warmup_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (*v < 0.0) error(it->second->line, "warmup_s must be non-negative");
            out.warmup_s = *v;
        }
    }
}

void Parser::build_zone(const Section& s, Scenario& out) {
    if (s.arg.empty()) {
        error(s.line, "[zone] needs an origin, e.g. [zone example.]");
        return;
    }
    DomainName origin;
    try {
        origin = DomainName::parse(s.arg);
    } catch (const std::exception& ex) {
        error(s.line, std::string("zone origin: ") + ex.what());
        return;
    }
    auto keys = index(s, {"ns_ttl"}, {"server", "record"});
    std::uint32_t ns_ttl = AuthZone::kDefaultNsTtl;
    if (auto it = keys.find("ns_ttl"); it != keys.end()) {
        if (auto v = integer(*it->second)) ns_ttl = static_cast<std::uint32_t>(*v);
    }

    std::vector<AuthServer> servers;
    std::vector<ResourceRecord> records;
    std::vector<std::size_t> record_lines;
    for (const auto& e : s.entries) {
        if (e.key == "server") {
            const auto words = split_ws(e.value);
            if (words.size() != 2) {
                error(e.line, "server: expected '<id> <seconds>' or '<id> <min>..<max>'");
                continue;
            }
            const std::string_view latency_text = words[1];
            const auto dots = latency_text.find("..");
            Entry lo{e.key, std::string(latency_text.substr(0, dots)), e.line};
            auto lo_v = real(lo);
            if (!lo_v) continue;
            LatencyModel model = LatencyModel::constant(*lo_v);
            if (dots != std::string_view::npos) {
                Entry hi{e.key, std::string(latency_text.substr(dots + 2)), e.line};
                auto hi_v = real(hi);
                if (!hi_v) continue;
                model = LatencyModel::uniform(*lo_v, *hi_v);
            }
            try {
                model.validate();
            } catch (const std::exception& ex) {
                error(e.line, std::string("server: ") + ex.what());
                continue;
            }
            servers.push_back(AuthServer{std::string(words[0]), model});
        } else if (e.key == "record") {
            const auto words = split_ws(e.value);
            if (words.size() != 4) {
                error(e.line, "record: expected '<name> <type> <ttl> <rdata>'");
                continue;
            }
            try {
                ResourceRecord r;
                r.name = DomainName::parse(words[0]);
                r.rtype = parse_rtype(words[1]);
                Entry ttl{"ttl", std::string(words[2]), e.line};
                auto ttl_v = integer(ttl);
                if (!ttl_v) continue;
                r.ttl_s = static_cast<std::uint32_t>(*ttl_v);
                if (r.rtype == RType::NS || r.rtype == RType::CNAME) {
                    r.rdata = DomainName::parse(words[3]);
                } else {
                    r.rdata = std::string(words[3]);
                }
                if (r.rtype == RType::NS && r.name == origin) {
                    error(e.line, "record: the zone NS set is declared with ns_ttl");
                    continue;
                }
                records.push_back(std::move(r));
                record_lines.push_back(e.line);
            } catch (const std::exception& ex) {
                error(e.line, std::string("record: ") + ex.what());
            }
        }
    }
    if (servers.empty()) {
        error(s.line, "zone " + origin.to_string() + " declares no server");
        return;
    }
    if (out.name_space.contains(origin)) {
        error(s.line, "duplicate zone " + origin.to_string());
        return;
    }
    AuthZone zone(origin, std::move(servers), ns_ttl);
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            zone.add_record(std::move(records[i]));
        } catch (const std::exception& ex) {
            error(record_lines[i], ex.what());
        }
    }
    out.name_space.add_zone(std::move(zone));
}

std::optional<ArrivalProcess> parse_process(std::string_view v) {
    if (v == "uniform") return ArrivalProcess::Uniform;
    if (v == "poisson") return ArrivalProcess::Poisson;
    return std::nullopt;
}

void Parser::build_attack(const Section& s, Scenario& out) {
    auto keys = index(s, {"rate_qps", "technique", "label_len", "zone", "target", "chain_len",
                          "depth", "start_s", "end_s", "arrivals"});
    AttackProfile p;
    p.name = s.arg.empty() ? "attack" + std::to_string(out.attack_profiles.size()) : s.arg;
    if (!profile_names_.insert(p.name).second) {
        error(s.line, "duplicate profile name '" + p.name + "'");
    }
    auto need = [&](const char* key) -> const Entry* {
        auto it = keys.find(key);
        if (it == keys.end()) {
            error(s.line, "[attack " + p.name + "] is missing " + key);
            return nullptr;
        }
        return it->second;
    };
    auto forbid = [&](std::initializer_list<const char*> unused, std::string_view technique) {
        for (const char* key : unused) {
            if (auto it = keys.find(key); it != keys.end()) {
                error(it->second->line,
                      std::string(key) + " does not apply to technique " + std::string(technique));
            }
        }
    };

    if (const Entry* e = need("rate_qps")) {
        if (auto v = real(*e)) {
            if (!(*v > 0.0)) error(e->line, "rate_qps must be positive");
            p.rate_qps = *v;
        }
    }
    std::optional<DomainName> zone;
    std::size_t zone_line = s.line;
    if (auto it = keys.find("zone"); it != keys.end()) {
        zone = name(*it->second);
        zone_line = it->second->line;
    }
    if (const Entry* e = need("technique")) {
        const std::string& t = e->value;
        if (t == "random_qname" || t == "slow_domain" || t == "cname_chain" ||
            t == "deep_labels") {
            if (!keys.contains("zone")) {
                error(s.line, "[attack " + p.name + "] is missing zone");
            }
        }
        if (t == "random_qname") {
            forbid({"target", "chain_len", "depth"}, t);
            RandomQnameTechnique r;
            if (auto it = keys.find("label_len"); it != keys.end()) {
                if (auto v = count(*it->second)) {
                    if (*v < 1 || *v > 63) error(it->second->line, "label_len must be in [1, 63]");
                    r.label_len = *v;
                }
            }
            r.zone = zone.value_or(DomainName{});
            p.technique = r;
        } else if (t == "zero_ttl") {
            forbid({"zone", "label_len", "chain_len", "depth"}, t);
            ZeroTtlTechnique z;
            if (const Entry* te = need("target")) {
                if (auto v = name(*te)) {
                    z.target = *v;
                    zone_refs_.emplace_back(z.target.parent(), te->line);
                }
            }
            p.technique = z;
        } else if (t == "cname_chain") {
            forbid({"target", "label_len", "depth"}, t);
            CnameChainTechnique c;
            if (const Entry* ce = need("chain_len")) {
                if (auto v = count(*ce)) c.chain_len = *v;
            }
            c.zone = zone.value_or(DomainName{});
            p.technique = c;
        } else if (t == "deep_labels") {
            forbid({"target", "label_len", "chain_len"}, t);
            DeepLabelsTechnique d;
            if (const Entry* de = need("depth")) {
                if (auto v = count(*de)) {
                    if (*v < 1) error(de->line, "depth must be >= 1");
                    d.depth = *v;
                }
            }
            d.zone = zone.value_or(DomainName{});
            p.technique = d;
        } else if (t == "slow_domain") {
            forbid({"target", "label_len", "chain_len", "depth"}, t);
            p.technique = SlowDomainTechnique{zone.value_or(DomainName{})};
        } else {
            error(e->line, "unknown technique '" + t + "'");
        }
        if (zone && t != "zero_ttl") {
            zone_refs_.emplace_back(*zone, zone_line);
        }
    }
    if (auto it = keys.find("start_s"); it != keys.end()) {
        if (auto v = real(*it->second)) p.start_s = *v;
    }
    std::optional<double> end;
    if (auto it = keys.find("end_s"); it != keys.end()) {
        end = real(*it->second);
    }
    if (auto it = keys.find("arrivals"); it != keys.end()) {
        if (auto v = parse_process(it->second->value)) {
            p.process = *v;
        } else {
            error(it->second->line, "arrivals must be uniform or poisson");
        }
    }
    pending_end_.push_back(end);
    out.attack_profiles.push_back(std::move(p));
}

void Parser::build_legit(const Section& s, Scenario& out) {
    auto keys = index(s, {"rate_qps", "qname", "start_s", "end_s", "arrivals"});
    LegitProfile p;
    p.name = s.arg.empty() ? "legit" + std::to_string(out.legit_profiles.size()) : s.arg;
    if (!profile_names_.insert(p.name).second) {
        error(s.line, "duplicate profile name '" + p.name + "'");
    }
    if (auto it = keys.find("rate_qps"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (!(*v > 0.0)) error(it->second->line, "rate_qps must be positive");
            p.rate_qps = *v;
        }
    } else {
        error(s.line, "[legit " + p.name + "] is missing rate_qps");
    }
    if (auto it = keys.find("qname"); it != keys.end()) {
        if (auto v = name(*it->second)) p.qname = *v;
    } else {
        error(s.line, "[legit " + p.name + "] is missing qname");
    }
    if (auto it = keys.find("start_s"); it != keys.end()) {
        if (auto v = real(*it->second)) p.start_s = *v;
    }
    std::optional<double> end;
    if (auto it = keys.find("end_s"); it != keys.end()) {
        end = real(*it->second);
    }
    if (auto it = keys.find("arrivals"); it != keys.end()) {
        if (auto v = parse_process(it->second->value)) {
            p.process = *v;
        } else {
            error(it->second->line, "arrivals must be uniform or poisson");
        }
    }
    pending_end_.push_back(end);
    out.legit_profiles.push_back(std::move(p));
}

void Parser::build_probe(const Section& s, Scenario& out) {
    auto keys = index(s, {"zone", "testing_name", "min_delay_s", "trials", "client_link_s",
                          "jitter_s"});
    ProbePlan plan;
    plan.name = s.arg.empty() ? "probe" + std::to_string(out.probe_plans.size()) : s.arg;
    auto need = [&](const char* key) -> const Entry* {
        auto it = keys.find(key);
        if (it == keys.end()) {
            error(s.line, "[probe " + plan.name + "] is missing " + key);
            return nullptr;
        }
        return it->second;
    };
    if (const Entry* e = need("zone")) {
        if (auto v = name(*e)) {
            plan.zone = *v;
            zone_refs_.emplace_back(*v, e->line);
        }
    }
    if (const Entry* e = need("testing_name")) {
        if (auto v = name(*e)) plan.testing_name = *v;
    }
    if (const Entry* e = need("min_delay_s")) {
        if (auto v = real(*e)) {
            if (*v < 0.0) error(e->line, "min_delay_s must be non-negative");
            plan.min_delay_s = *v;
        }
    }
    if (auto it = keys.find("trials"); it != keys.end()) {
        if (auto v = count(*it->second)) {
            if (*v < 1) error(it->second->line, "trials must be >= 1");
            plan.n_trials = *v;
        }
    }
    if (auto it = keys.find("client_link_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (*v < 0.0) error(it->second->line, "client_link_s must be non-negative");
            plan.client_link_s = *v;
        }
    }
    if (auto it = keys.find("jitter_s"); it != keys.end()) {
        if (auto v = real(*it->second)) {
            if (*v < 0.0) error(it->second->line, "jitter_s must be non-negative");
            plan.jitter_s = *v;
        }
    }
    probe_lines_.push_back(s.line);
    out.probe_plans.push_back(std::move(plan));
}

void Parser::cross_check(Scenario& out) {
    // Profile windows default to the whole run.
    std::size_t k = 0;
    auto resolve_end = [&](auto& profile) {
        const auto& end = pending_end_[k++];
        profile.end_s = end.value_or(out.horizon_s);
        if (!(profile.end_s > profile.start_s) || profile.start_s < 0.0) {
            error(0, "profile " + profile.name + ": need 0 <= start_s < end_s");
        }
    };
    for (auto& p : out.attack_profiles) resolve_end(p);
    for (auto& p : out.legit_profiles) resolve_end(p);

    for (const auto& [zone, line] : zone_refs_) {
        if (!out.name_space.contains(zone)) {
            error(line, "reference to undeclared zone " + zone.to_string());
        }
    }
    const bool needs_resolver = !out.attack_profiles.empty() || !out.legit_profiles.empty() ||
                                !out.probe_plans.empty();
    if (needs_resolver && !out.name_space.has_root()) {
        error(0, "profiles and probes need a root zone: declare [zone .]");
    }
    try {
        out.name_space.validate();
    } catch (const std::exception& ex) {
        error(0, ex.what());
    }
    for (std::size_t i = 0; i < out.probe_plans.size(); ++i) {
        const auto& plan = out.probe_plans[i];
        if (plan.n_trials && out.name_space.contains(plan.zone)) {
            const auto servers = out.name_space.zone(plan.zone).servers().size();
            if (*plan.n_trials < servers) {
                error(probe_lines_[i], "probe " + plan.name + ": trials (" +
                                           std::to_string(*plan.n_trials) +
                                           ") fewer than the zone's " + std::to_string(servers) +
                                           " servers");
            }
        }
    }
}

Scenario Parser::parse() {
    Scenario out;
    bool seen_quota = false;
    bool seen_run = false;
    for (const Section& s : tokenize()) {
        if (s.kind == "quota" || s.kind == "run") {
            bool& seen = s.kind == "quota" ? seen_quota : seen_run;
            if (seen) {
                error(s.line, "duplicate [" + s.kind + "] section");
                continue;
            }
            seen = true;
            if (!s.arg.empty()) {
                error(s.line, "[" + s.kind + "] takes no argument");
            }
            s.kind == "quota" ? build_quota(s, out) : build_run(s, out);
        } else if (s.kind == "zone") {
            build_zone(s, out);
        } else if (s.kind == "attack") {
            build_attack(s, out);
        } else if (s.kind == "legit") {
            build_legit(s, out);
        } else if (s.kind == "probe") {
            build_probe(s, out);
        } else {
            error(s.line, "unknown section [" + s.kind + "]");
        }
    }
    if (!seen_run) {
        error(0, "missing [run] section (seed and horizon_s are required)");
    }
    cross_check(out);
    if (!issues_.empty()) {
        throw ScenarioError(std::move(issues_));
    }
    return out;
}

std::string describe(const std::vector<ScenarioIssue>& issues) {
    std::string msg;
    for (const auto& i : issues) {
        if (!msg.empty()) msg += '\n';
        msg += i.line ? "line " + std::to_string(i.line) + ": " + i.message : i.message;
    }
    return msg;
}

std::string latency_text(const LatencyModel& m) {
    if (m.kind == LatencyModel::Kind::Constant) {
        return format_double(m.min_s);
    }
    return format_double(m.min_s) + ".." + format_double(m.max_s);
}

std::string rdata_text(const ResourceRecord& r) {
    if (const DomainName* t = r.target()) {
        return t->to_string();
    }
    return std::get<std::string>(r.rdata);
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ScenarioIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

Scenario parse_scenario(std::string_view text) { return Parser(text).parse(); }

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::uint64_t parse_byte_count(std::string_view text) {
    std::uint64_t multiplier = 1;
    if (!text.empty()) {
        switch (text.back()) {
            case 'k': case 'K': multiplier = 1'000; break;
            case 'M': multiplier = 1'000'000; break;
            case 'G': multiplier = 1'000'000'000; break;
            default: break;
        }
        if (multiplier != 1) text.remove_suffix(1);
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("expected a byte count like 20000, 20k, 2M or 1G");
    }
    if (v != 0 && multiplier > std::numeric_limits<std::uint64_t>::max() / v) {
        throw std::invalid_argument("byte count overflows 64 bits");
    }
    return v * multiplier;
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "[quota]\n"
        << "recursive_clients = " << s.quota.recursive_clients << '\n'
        << "timeout_s = " << format_double(s.quota.configured_timeout_s) << '\n'
        << "per_client_memory = " << s.quota.per_client_memory_bytes << '\n'
        << "validate_bind_range = " << (s.validate_bind_range ? "true" : "false") << '\n'
        << "drop_on_reject = " << (s.drop_on_reject ? "true" : "false") << '\n';

    for (const auto& [origin, zone] : s.name_space.zones()) {
        out << "\n[zone " << origin.to_string() << "]\n"
            << "ns_ttl = " << zone.ns_ttl() << '\n';
        for (const auto& server : zone.servers()) {
            out << "server = " << server.id << ' ' << latency_text(server.latency) << '\n';
        }
        for (std::size_t i = 1; i < zone.records().size(); ++i) {
            const auto& r = zone.records()[i];
            out << "record = " << r.name.to_string() << ' ' << to_string(r.rtype) << ' '
                << r.ttl_s << ' ' << rdata_text(r) << '\n';
        }
    }

    auto window = [&](const auto& p) {
        out << "start_s = " << format_double(p.start_s) << '\n'
            << "end_s = " << format_double(p.end_s) << '\n'
            << "arrivals = " << (p.process == ArrivalProcess::Uniform ? "uniform" : "poisson")
            << '\n';
    };
    for (const auto& p : s.attack_profiles) {
        out << "\n[attack " << p.name << "]\n"
            << "rate_qps = " << format_double(p.rate_qps) << '\n'
            << "technique = " << technique_name(p.technique) << '\n';
        std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, RandomQnameTechnique>) {
                    out << "label_len = " << t.label_len << '\n'
                        << "zone = " << t.zone.to_string() << '\n';
                } else if constexpr (std::is_same_v<T, ZeroTtlTechnique>) {
                    out << "target = " << t.target.to_string() << '\n';
                } else if constexpr (std::is_same_v<T, CnameChainTechnique>) {
                    out << "chain_len = " << t.chain_len << '\n'
                        << "zone = " << t.zone.to_string() << '\n';
                } else if constexpr (std::is_same_v<T, DeepLabelsTechnique>) {
                    out << "depth = " << t.depth << '\n' << "zone = " << t.zone.to_string() << '\n';
                } else {
                    out << "zone = " << t.zone.to_string() << '\n';
                }
            },
            p.technique);
        window(p);
    }
    for (const auto& p : s.legit_profiles) {
        out << "\n[legit " << p.name << "]\n"
            << "rate_qps = " << format_double(p.rate_qps) << '\n'
            << "qname = " << p.qname.to_string() << '\n';
        window(p);
    }
    for (const auto& p : s.probe_plans) {
        out << "\n[probe " << p.name << "]\n"
            << "zone = " << p.zone.to_string() << '\n'
            << "testing_name = " << p.testing_name.to_string() << '\n'
            << "min_delay_s = " << format_double(p.min_delay_s) << '\n';
        if (p.n_trials) {
            out << "trials = " << *p.n_trials << '\n';
        }
        out << "client_link_s = " << format_double(p.client_link_s) << '\n'
            << "jitter_s = " << format_double(p.jitter_s) << '\n';
    }
    out << "\n[run]\n"
        << "seed = " << s.seed << '\n'
        << "horizon_s = " << format_double(s.horizon_s) << '\n'
        << "sampling_interval_s = " << format_double(s.sampling_interval_s) << '\n';
    if (s.warmup_s) {
        out << "warmup_s = " << format_double(*s.warmup_s) << '\n';
    }
    return out.str();
}

}  // namespace recursim
