#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "apollo/enrichment.hpp"

namespace apollo {

// Host-keyed enrichment cache: in-memory map with a TTL and an optional
// on-disk spill so repeated evaluation runs reuse lookups. Entries read
// back from the cache report source = cache.
class EnrichmentCache {
public:
    using TimePoint = std::chrono::system_clock::time_point;
    using Clock = std::function<TimePoint()>;

    explicit EnrichmentCache(std::chrono::seconds ttl,
                             std::optional<std::filesystem::path> spill_path = std::nullopt,
                             Clock clock = [] { return std::chrono::system_clock::now(); });

    std::optional<UrlEnrichment> get(const std::string& host_url);
    void put(const std::string& host_url, const UrlEnrichment& value);
    std::size_t size() const;

private:
    struct Entry {
        UrlEnrichment value;
        TimePoint expiry;
    };

    void load_spill();
    void save_spill() const;

    std::chrono::seconds ttl_;
    std::optional<std::filesystem::path> spill_path_;
    Clock clock_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Entry> entries_;
};

} // namespace apollo
