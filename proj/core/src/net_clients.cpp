#include "apollo/net_clients.hpp"

#include <netdb.h>
#include <arpa/inet.h>
#include <sys/socket.h>

#include <cstring>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "apollo/encoding.hpp"
#include "apollo/errors.hpp"

namespace apollo {

namespace {

std::unique_ptr<httplib::Client> make_client(const std::string& base_url) {
    auto client = std::make_unique<httplib::Client>(base_url);
    client->set_connection_timeout(10, 0);
    client->set_read_timeout(30, 0);
    client->set_follow_location(true);
    return client;
}

[[noreturn]] void throw_for_status(int status, const std::string& what) {
    if (status == 401 || status == 403) throw AuthError(what + ": HTTP " + std::to_string(status));
    if (status == 429) throw RateLimited(what + ": HTTP 429");
    throw TransportError(what + ": HTTP " + std::to_string(status));
}

bool is_alpha3(const std::string& s) {
    if (s.size() != 3) return false;
    for (char c : s)
        if (c < 'A' || c > 'Z') return false;
    return true;
}

// Depth-first search for an alpha-3 country code under a key containing
// "alpha3"; services differ on the exact field name.
std::optional<std::string> find_alpha3(const nlohmann::json& node) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            std::string lower = key;
            for (char& c : lower)
                if (c >= 'A' && c <= 'Z') c += 32;
            if (lower.find("alpha3") != std::string::npos && value.is_string()) {
                const std::string code = value.get<std::string>();
                if (is_alpha3(code)) return code;
            }
        }
        for (const auto& [key, value] : node.items()) {
            if (auto found = find_alpha3(value)) return found;
        }
    } else if (node.is_array()) {
        for (const auto& item : node) {
            if (auto found = find_alpha3(item)) return found;
        }
    }
    return std::nullopt;
}

} // namespace

std::string vt_request_id(std::string_view host_url) {
    return base64url_encode_nopad(host_url);
}

std::string hostname_of(std::string_view host_url) {
    const std::size_t sep = host_url.find("://");
    return std::string(sep == std::string_view::npos ? host_url : host_url.substr(sep + 3));
}

struct VtClient::Impl {
    std::string base_url;
    std::string api_key;
};

VtClient::VtClient(std::string base_url, std::string api_key)
    : impl_(new Impl{std::move(base_url), std::move(api_key)}) {}
VtClient::~VtClient() = default;
VtClient::VtClient(VtClient&&) noexcept = default;
VtClient& VtClient::operator=(VtClient&&) noexcept = default;

std::optional<VtVerdicts> VtClient::lookup(const std::string& host_url) const {
    auto client = make_client(impl_->base_url);
    httplib::Headers headers{{"x-apikey", impl_->api_key}};
    const std::string path = "/api/v3/urls/" + vt_request_id(host_url);
    httplib::Result res = client->Get(path, headers);
    if (!res) throw TransportError("reputation lookup failed: " + httplib::to_string(res.error()));
    if (res->status == 404) return std::nullopt; // URL never scanned
    if (res->status != 200) throw_for_status(res->status, "reputation lookup");

    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded())
        throw TransportError("reputation lookup: response is not JSON");
    const nlohmann::json* stats = nullptr;
    if (doc.contains("data") && doc["data"].contains("attributes") &&
        doc["data"]["attributes"].contains("last_analysis_stats"))
        stats = &doc["data"]["attributes"]["last_analysis_stats"];
    if (!stats) throw TransportError("reputation lookup: no last_analysis_stats in response");

    VtVerdicts verdicts;
    verdicts.n_harmless = stats->value("harmless", 0);
    verdicts.n_undetected = stats->value("undetected", 0);
    verdicts.n_malicious = stats->value("malicious", 0);
    return verdicts;
}

Resolver system_resolver() {
    return [](const std::string& hostname) {
        std::vector<std::string> addresses;
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* results = nullptr;
        if (getaddrinfo(hostname.c_str(), nullptr, &hints, &results) != 0) return addresses;
        for (addrinfo* it = results; it; it = it->ai_next) {
            char buffer[INET6_ADDRSTRLEN] = {};
            if (it->ai_family == AF_INET) {
                auto* addr = reinterpret_cast<sockaddr_in*>(it->ai_addr);
                if (inet_ntop(AF_INET, &addr->sin_addr, buffer, sizeof buffer))
                    addresses.emplace_back(buffer);
            } else if (it->ai_family == AF_INET6) {
                auto* addr = reinterpret_cast<sockaddr_in6*>(it->ai_addr);
                if (inet_ntop(AF_INET6, &addr->sin6_addr, buffer, sizeof buffer))
                    addresses.emplace_back(buffer);
            }
        }
        freeaddrinfo(results);
        return addresses;
    };
}

struct GeoClient::Impl {
    std::string base_url;
    std::string api_key;
};

GeoClient::GeoClient(std::string base_url, std::string api_key)
    : impl_(new Impl{std::move(base_url), std::move(api_key)}) {}
GeoClient::~GeoClient() = default;
GeoClient::GeoClient(GeoClient&&) noexcept = default;
GeoClient& GeoClient::operator=(GeoClient&&) noexcept = default;

std::optional<std::string> GeoClient::locate(const std::string& host_url, const Resolver& resolver) const {
    const std::vector<std::string> addresses = resolver(hostname_of(host_url));
    if (addresses.empty()) return std::nullopt; // enrichment proceeds without a country

    auto client = make_client(impl_->base_url);
    std::string path = "/data/country-by-ip?ip=" + addresses.front();
    if (!impl_->api_key.empty()) path += "&key=" + impl_->api_key;
    httplib::Result res = client->Get(path);
    if (!res) throw TransportError("geolocation failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw_for_status(res->status, "geolocation");

    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw TransportError("geolocation: response is not JSON");
    return find_alpha3(doc);
}

} // namespace apollo
