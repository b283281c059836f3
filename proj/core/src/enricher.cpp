#include "apollo/enricher.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

std::map<std::string, std::string> load_geo_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open geo map: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error("geo map is not a JSON object: " + path.string());
    std::map<std::string, std::string> map;
    for (const auto& [host, code] : doc.items()) {
        if (!code.is_string()) throw Error("geo map value for " + host + " is not a string");
        const std::string country = code.get<std::string>();
        if (country.size() != 3) throw Error("geo map value for " + host + " is not alpha-3");
        map[host] = country;
    }
    return map;
}

Enricher::Enricher(EnricherOptions options)
    : options_(std::move(options)),
      vt_(options_.vt_base_url, options_.vt_api_key),
      geo_(options_.geo_base_url, options_.geo_api_key),
      cache_(options_.cache_ttl, options_.cache_path),
      vt_limiter_(options_.rate_limit_per_min, std::chrono::minutes(1)),
      geo_limiter_(options_.rate_limit_per_min, std::chrono::minutes(1)) {}

std::optional<UrlEnrichment> Enricher::enrich(const PreprocessedEmail& email, const EnrichMode& mode,
                                              bool wait_for_slot) {
    return enrich_urls(email.urls, mode, wait_for_slot);
}

std::optional<UrlEnrichment> Enricher::enrich(const DatasetEmail& email, const EnrichMode& mode,
                                              bool wait_for_slot) {
    return enrich_urls(email.urls, mode, wait_for_slot);
}

std::optional<std::string> Enricher::stub_country(const std::string& host_url) const {
    const auto by_url = options_.geo_map.find(host_url);
    if (by_url != options_.geo_map.end()) return by_url->second;
    const auto by_host = options_.geo_map.find(hostname_of(host_url));
    if (by_host != options_.geo_map.end()) return by_host->second;
    return std::nullopt;
}

std::optional<UrlEnrichment> Enricher::enrich_urls(const std::vector<std::string>& urls,
                                                   const EnrichMode& mode, bool wait_for_slot) {
    if (mode.kind == EnrichMode::Kind::off || urls.empty()) return std::nullopt;

    if (mode.kind == EnrichMode::Kind::simulated) {
        std::string host;
        try {
            host = extract_primary_host(urls).value_or("");
        } catch (const UnparseableUrl&) {
            // simulated mode never raises; carry on without a host
        }
        auto enriched = simulate_enrichment(options_.table.get(mode.condition), mode.truth, host);
        if (!enriched) return std::nullopt; // noURL
        if (!host.empty()) {
            enriched->country = stub_country(host);
            if (!enriched->country && options_.live_geo_for_simulated) {
                try {
                    if (wait_for_slot)
                        geo_limiter_.acquire();
                    else if (!geo_limiter_.try_acquire())
                        return enriched;
                    enriched->country = geo_.locate(host, options_.resolver);
                } catch (const Error&) {
                    // country stays absent
                }
            }
        }
        return enriched;
    }

    // live
    const std::optional<std::string> host = extract_primary_host(urls);
    if (!host) return std::nullopt;
    if (auto cached = cache_.get(*host)) return cached;

    UrlEnrichment enriched;
    enriched.host_url = *host;
    enriched.source = EnrichmentSource::live;

    if (wait_for_slot)
        vt_limiter_.acquire();
    else if (!vt_limiter_.try_acquire())
        throw RateLimited("reputation limiter saturated");
    enriched.verdicts = vt_.lookup(*host);

    if (auto stub = stub_country(*host)) {
        enriched.country = stub;
    } else {
        if (wait_for_slot)
            geo_limiter_.acquire();
        else if (!geo_limiter_.try_acquire())
            throw RateLimited("geolocation limiter saturated");
        enriched.country = geo_.locate(*host, options_.resolver);
    }

    cache_.put(*host, enriched);
    return enriched;
}

} // namespace apollo
