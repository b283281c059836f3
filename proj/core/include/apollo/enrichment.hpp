#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apollo/email.hpp"

namespace apollo {

// Scanner verdict counts for one URL: how many detectors called it
// harmless, failed to classify it, or called it malicious.
struct VtVerdicts {
    int n_harmless = 0;
    int n_undetected = 0;
    int n_malicious = 0;

    bool operator==(const VtVerdicts&) const = default;
};

// Empirical per-field maxima observed on real reputation data; the
// simulator never leaves these ranges (live lookups are unconstrained).
inline constexpr VtVerdicts kSimulatedVerdictCeiling{87, 28, 25};

enum class EnrichmentSource { live, simulated, cache };

// Threat-intelligence context for an email's primary URL.
struct UrlEnrichment {
    std::string host_url;                 // "protocol://hostname"
    std::optional<std::string> country;   // ISO 3166-1 alpha-3
    std::optional<VtVerdicts> verdicts;
    EnrichmentSource source = EnrichmentSource::live;

    bool operator==(const UrlEnrichment&) const = default;
};

// The ten simulated intelligence-maturity conditions. noURL omits URL data
// entirely; Q0..Q100 grade confirmatory data from fully uncertain to fully
// confirmed; the ERR variants feed each class the other one's harmless /
// malicious counts to model wrong intelligence.
struct SimulationCondition {
    std::string name;
    std::optional<VtVerdicts> legit;     // empty for noURL
    std::optional<VtVerdicts> phishing;
};

class ConditionTable {
public:
    // The built-in table. Q0 reports every detector as "undetected" for
    // both classes; all other rows carry the per-class verdict triples.
    static ConditionTable defaults();
    // Loads a JSON file {condition: {legit: [h,u,m], phishing: [h,u,m]}},
    // validating names and simulator ranges. noURL may be omitted.
    static ConditionTable from_file(const std::filesystem::path& path);

    static const std::vector<std::string>& condition_names();
    static bool is_condition_name(std::string_view name);

    const SimulationCondition& get(std::string_view name) const; // throws UnknownCondition -> Error
    const std::vector<SimulationCondition>& conditions() const { return conditions_; }

private:
    std::vector<SimulationCondition> conditions_;
};

// Scheme + lowercased hostname of the first URL, with port, path, query
// and fragment stripped; nullopt when the list is empty. Throws
// UnparseableUrl when the first entry has no scheme + authority.
std::optional<std::string> extract_primary_host(const std::vector<std::string>& urls);

// Pure verdict lookup for one condition and ground-truth class. noURL
// yields nullopt. `host_url` is carried through when the caller knows it.
std::optional<UrlEnrichment> simulate_enrichment(const SimulationCondition& condition, Label truth,
                                                 std::string host_url = {});

} // namespace apollo
