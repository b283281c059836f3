#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "apollo/email.hpp"
#include "apollo/enrichment.hpp"
#include "apollo/net_clients.hpp"
#include "apollo/rate_limiter.hpp"
#include "apollo/ttl_cache.hpp"

namespace apollo {

// How enrich() sources its data for one call.
struct EnrichMode {
    enum class Kind { off, live, simulated };
    Kind kind = Kind::off;
    std::string condition; // simulated only
    Label truth = Label::legit;

    static EnrichMode off() { return {}; }
    static EnrichMode live() { return {Kind::live, {}, Label::legit}; }
    static EnrichMode simulated(std::string condition, Label truth) {
        return {Kind::simulated, std::move(condition), truth};
    }
};

struct EnricherOptions {
    ConditionTable table = ConditionTable::defaults();
    std::string vt_base_url = "https://www.virustotal.com";
    std::string vt_api_key;
    std::string geo_base_url = "https://api.bigdatacloud.net";
    std::string geo_api_key;
    int rate_limit_per_min = 4; // per service
    std::chrono::seconds cache_ttl = std::chrono::hours(24);
    std::optional<std::filesystem::path> cache_path;
    // Offline country source: "https://host" or bare hostname -> alpha-3.
    std::map<std::string, std::string> geo_map;
    // Reach out to the geolocation service for simulated conditions when no
    // stub mapping matches (requires network).
    bool live_geo_for_simulated = false;
    Resolver resolver = system_resolver();
};

// JSON object mapping host (or hostname) -> ISO 3166-1 alpha-3 code.
std::map<std::string, std::string> load_geo_map(const std::filesystem::path& path);

// Produces the UrlEnrichment for an email's primary URL. Only the first URL
// is ever consulted. Live lookups go through the per-service rate limiters
// and the TTL cache; simulated and off modes never raise.
class Enricher {
public:
    explicit Enricher(EnricherOptions options);

    // `wait_for_slot=false` turns limiter saturation into RateLimited
    // instead of blocking (used by the HTTP service).
    std::optional<UrlEnrichment> enrich(const PreprocessedEmail& email, const EnrichMode& mode,
                                        bool wait_for_slot = true);
    std::optional<UrlEnrichment> enrich(const DatasetEmail& email, const EnrichMode& mode,
                                        bool wait_for_slot = true);

    const EnricherOptions& options() const { return options_; }

private:
    std::optional<UrlEnrichment> enrich_urls(const std::vector<std::string>& urls,
                                             const EnrichMode& mode, bool wait_for_slot);
    std::optional<std::string> stub_country(const std::string& host_url) const;

    EnricherOptions options_;
    VtClient vt_;
    GeoClient geo_;
    EnrichmentCache cache_;
    SlidingWindowLimiter vt_limiter_;
    SlidingWindowLimiter geo_limiter_;
};

} // namespace apollo
