#include "apollo/enrichment.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

SimulationCondition make(std::string name, VtVerdicts legit, VtVerdicts phishing) {
    return SimulationCondition{std::move(name), legit, phishing};
}

void check_range(const std::string& condition, const VtVerdicts& v) {
    const auto bad = [&](const char* field, int value, int max) {
        throw Error("condition " + condition + ": " + field + "=" + std::to_string(value) +
                    " outside simulator range [0," + std::to_string(max) + "]");
    };
    if (v.n_harmless < 0 || v.n_harmless > kSimulatedVerdictCeiling.n_harmless)
        bad("harmless", v.n_harmless, kSimulatedVerdictCeiling.n_harmless);
    if (v.n_undetected < 0 || v.n_undetected > kSimulatedVerdictCeiling.n_undetected)
        bad("undetected", v.n_undetected, kSimulatedVerdictCeiling.n_undetected);
    if (v.n_malicious < 0 || v.n_malicious > kSimulatedVerdictCeiling.n_malicious)
        bad("malicious", v.n_malicious, kSimulatedVerdictCeiling.n_malicious);
}

} // namespace

ConditionTable ConditionTable::defaults() {
    ConditionTable table;
    table.conditions_ = {
        SimulationCondition{"noURL", std::nullopt, std::nullopt},
        make("Q0", {0, 28, 0}, {0, 28, 0}),
        make("Q25", {22, 21, 0}, {0, 0, 6}),
        make("Q50", {43, 14, 0}, {0, 0, 12}),
        make("Q75", {65, 7, 0}, {0, 0, 19}),
        make("Q100", {87, 0, 0}, {0, 0, 25}),
        make("Q25ERR", {0, 21, 6}, {22, 0, 0}),
        make("Q50ERR", {0, 14, 12}, {43, 0, 0}),
        make("Q75ERR", {0, 7, 19}, {65, 0, 0}),
        make("Q100ERR", {0, 0, 25}, {87, 0, 0}),
    };
    return table;
}

const std::vector<std::string>& ConditionTable::condition_names() {
    static const std::vector<std::string> names = {
        "noURL", "Q0", "Q25", "Q50", "Q75", "Q100", "Q25ERR", "Q50ERR", "Q75ERR", "Q100ERR"};
    return names;
}

bool ConditionTable::is_condition_name(std::string_view name) {
    for (const std::string& known : condition_names())
        if (known == name) return true;
    return false;
}

ConditionTable ConditionTable::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open condition table: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error("condition table is not a JSON object: " + path.string());

    ConditionTable table = defaults();
    for (const auto& [name, row] : doc.items()) {
        if (!is_condition_name(name)) throw Error("unknown condition name: " + name);
        if (name == "noURL") continue; // carries no verdicts by definition
        const auto triple = [&](const char* cls) -> VtVerdicts {
            if (!row.contains(cls) || !row[cls].is_array() || row[cls].size() != 3)
                throw Error("condition " + name + ": expected \"" + cls + "\": [h,u,m]");
            VtVerdicts v{row[cls][0].get<int>(), row[cls][1].get<int>(), row[cls][2].get<int>()};
            check_range(name, v);
            return v;
        };
        for (SimulationCondition& cond : table.conditions_) {
            if (cond.name == name) {
                cond.legit = triple("legit");
                cond.phishing = triple("phishing");
            }
        }
    }
    return table;
}

const SimulationCondition& ConditionTable::get(std::string_view name) const {
    for (const SimulationCondition& cond : conditions_)
        if (cond.name == name) return cond;
    throw Error("unknown condition: " + std::string(name));
}

std::optional<std::string> extract_primary_host(const std::vector<std::string>& urls) {
    if (urls.empty()) return std::nullopt;
    const std::string& first = urls.front();

    const std::size_t sep = first.find("://");
    if (sep == std::string::npos || sep == 0)
        throw UnparseableUrl("no scheme in url: \"" + first + "\"");
    std::string scheme = first.substr(0, sep);
    for (char& c : scheme) {
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '+' || c == '-' || c == '.'))
            throw UnparseableUrl("bad scheme in url: \"" + first + "\"");
        if (c >= 'A' && c <= 'Z') c += 32;
    }
    if (!((scheme[0] >= 'a' && scheme[0] <= 'z')))
        throw UnparseableUrl("bad scheme in url: \"" + first + "\"");

    std::size_t begin = sep + 3;
    std::size_t end = begin;
    while (end < first.size() && first[end] != '/' && first[end] != '?' && first[end] != '#')
        ++end;
    std::string authority = first.substr(begin, end - begin);
    // strip userinfo and port
    const std::size_t at = authority.rfind('@');
    if (at != std::string::npos) authority = authority.substr(at + 1);
    if (!authority.empty() && authority.front() == '[') {
        // IPv6 literal: keep brackets, strip anything after ']'
        const std::size_t close = authority.find(']');
        if (close != std::string::npos) authority = authority.substr(0, close + 1);
    } else {
        const std::size_t colon = authority.find(':');
        if (colon != std::string::npos) authority = authority.substr(0, colon);
    }
    if (authority.empty()) throw UnparseableUrl("no host in url: \"" + first + "\"");
    for (char& c : authority)
        if (c >= 'A' && c <= 'Z') c += 32;
    return scheme + "://" + authority;
}

std::optional<UrlEnrichment> simulate_enrichment(const SimulationCondition& condition, Label truth,
                                                 std::string host_url) {
    if (!condition.legit || !condition.phishing) return std::nullopt; // noURL
    UrlEnrichment enriched;
    enriched.host_url = std::move(host_url);
    enriched.verdicts = truth == Label::phishing ? *condition.phishing : *condition.legit;
    enriched.source = EnrichmentSource::simulated;
    return enriched;
}

} // namespace apollo
