#include "apollo/ttl_cache.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace apollo {

namespace {

nlohmann::json to_json(const UrlEnrichment& e) {
    nlohmann::json j;
    j["host_url"] = e.host_url;
    if (e.country) j["country"] = *e.country;
    if (e.verdicts)
        j["verdicts"] = {e.verdicts->n_harmless, e.verdicts->n_undetected, e.verdicts->n_malicious};
    return j;
}

UrlEnrichment from_json(const nlohmann::json& j) {
    UrlEnrichment e;
    e.host_url = j.value("host_url", "");
    if (j.contains("country")) e.country = j["country"].get<std::string>();
    if (j.contains("verdicts") && j["verdicts"].is_array() && j["verdicts"].size() == 3)
        e.verdicts = VtVerdicts{j["verdicts"][0].get<int>(), j["verdicts"][1].get<int>(),
                                j["verdicts"][2].get<int>()};
    e.source = EnrichmentSource::cache;
    return e;
}

} // namespace

EnrichmentCache::EnrichmentCache(std::chrono::seconds ttl,
                                 std::optional<std::filesystem::path> spill_path, Clock clock)
    : ttl_(ttl), spill_path_(std::move(spill_path)), clock_(std::move(clock)) {
    if (spill_path_ && std::filesystem::exists(*spill_path_)) load_spill();
}

std::optional<UrlEnrichment> EnrichmentCache::get(const std::string& host_url) {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(host_url);
    if (it == entries_.end()) return std::nullopt;
    if (it->second.expiry <= clock_()) {
        entries_.erase(it);
        return std::nullopt;
    }
    UrlEnrichment hit = it->second.value;
    hit.source = EnrichmentSource::cache;
    return hit;
}

void EnrichmentCache::put(const std::string& host_url, const UrlEnrichment& value) {
    std::lock_guard lock(mutex_);
    entries_[host_url] = Entry{value, clock_() + ttl_};
    if (spill_path_) save_spill();
}

std::size_t EnrichmentCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void EnrichmentCache::load_spill() {
    std::ifstream in(*spill_path_);
    if (!in) return;
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return;
    for (const auto& [key, entry] : doc.items()) {
        if (!entry.contains("expiry_unix") || !entry.contains("value")) continue;
        const TimePoint expiry = TimePoint(std::chrono::seconds(entry["expiry_unix"].get<long long>()));
        if (expiry <= clock_()) continue;
        entries_[key] = Entry{from_json(entry["value"]), expiry};
    }
}

void EnrichmentCache::save_spill() const {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [key, entry] : entries_) {
        doc[key] = {
            {"expiry_unix",
             std::chrono::duration_cast<std::chrono::seconds>(entry.expiry.time_since_epoch()).count()},
            {"value", to_json(entry.value)},
        };
    }
    const std::filesystem::path tmp = spill_path_->string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << doc.dump();
    }
    std::error_code ec;
    std::filesystem::rename(tmp, *spill_path_, ec);
}

} // namespace apollo
