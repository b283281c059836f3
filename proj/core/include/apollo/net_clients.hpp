#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apollo/enrichment.hpp"

namespace apollo {

// Request id for the reputation API: URL-safe base64 of the host URL with
// trailing padding removed.
std::string vt_request_id(std::string_view host_url);

// URL reputation client (GET {base_url}/api/v3/urls/{id} with an x-apikey
// header). Returns nullopt when the service has never scanned the URL.
// Throws AuthError / RateLimited / TransportError.
class VtClient {
public:
    VtClient(std::string base_url, std::string api_key);
    ~VtClient();
    VtClient(VtClient&&) noexcept;
    VtClient& operator=(VtClient&&) noexcept;

    std::optional<VtVerdicts> lookup(const std::string& host_url) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Name-to-address resolution is pluggable so offline runs and tests can
// substitute a stub for live DNS. Returns the resolved addresses in
// presentation form; empty on resolution failure.
using Resolver = std::function<std::vector<std::string>(const std::string& hostname)>;

Resolver system_resolver();

// IP geolocation client (GET {base_url}/data/country-by-ip?ip={ip}).
// Returns the ISO 3166-1 alpha-3 country code of the first resolved
// address, or nullopt when resolution fails. Throws TransportError on
// service failure, which is distinct from absent-on-DNS-failure.
class GeoClient {
public:
    GeoClient(std::string base_url, std::string api_key = {});
    ~GeoClient();
    GeoClient(GeoClient&&) noexcept;
    GeoClient& operator=(GeoClient&&) noexcept;

    std::optional<std::string> locate(const std::string& host_url, const Resolver& resolver) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Extracts the hostname from a "scheme://host" URL (no lowering, no
// validation beyond the separator).
std::string hostname_of(std::string_view host_url);

} // namespace apollo
