#include "apollo/llm.hpp"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

std::string conversation_digest(const Conversation& conversation) {
    uint64_t hash = 1469598103934665603ull; // FNV offset basis
    const auto mix = [&](std::string_view bytes) {
        for (char c : bytes) {
            hash ^= uint8_t(c);
            hash *= 1099511628211ull;
        }
    };
    for (const ChatMessage& message : conversation) {
        mix(message.role);
        mix("\n");
        mix(message.text);
        mix(std::string_view("\0", 1));
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

// --- mock backend ---

struct MockLlmBackend::Impl {
    nlohmann::json by_digest = nlohmann::json::object();
    struct Rule {
        std::vector<std::string> contains;
        std::string response;
    };
    std::vector<Rule> rules;
    std::vector<std::string> sequence;
    std::optional<std::string> fallback;

    std::atomic<std::size_t> next_in_sequence{0};
    std::mutex temps_mutex;
    std::vector<double> temperatures;
};

MockLlmBackend::MockLlmBackend() : impl_(new Impl) {}
MockLlmBackend::~MockLlmBackend() = default;
MockLlmBackend::MockLlmBackend(MockLlmBackend&&) noexcept = default;
MockLlmBackend& MockLlmBackend::operator=(MockLlmBackend&&) noexcept = default;

MockLlmBackend MockLlmBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mock fixtures: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

MockLlmBackend MockLlmBackend::from_json_text(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error("mock fixtures are not a JSON object");

    MockLlmBackend backend;
    if (doc.contains("by_digest")) backend.impl_->by_digest = doc["by_digest"];
    if (doc.contains("rules")) {
        for (const auto& rule : doc["rules"]) {
            Impl::Rule parsed;
            if (rule.contains("contains")) {
                if (rule["contains"].is_string()) {
                    parsed.contains.push_back(rule["contains"].get<std::string>());
                } else {
                    for (const auto& s : rule["contains"]) parsed.contains.push_back(s.get<std::string>());
                }
            }
            parsed.response = rule.value("response", "");
            backend.impl_->rules.push_back(std::move(parsed));
        }
    }
    if (doc.contains("sequence"))
        for (const auto& s : doc["sequence"]) backend.impl_->sequence.push_back(s.get<std::string>());
    if (doc.contains("default")) backend.impl_->fallback = doc["default"].get<std::string>();
    return backend;
}

std::string MockLlmBackend::complete(const Conversation& conversation, double temperature) {
    {
        std::lock_guard lock(impl_->temps_mutex);
        impl_->temperatures.push_back(temperature);
    }
    const std::string digest = conversation_digest(conversation);
    if (impl_->by_digest.contains(digest)) return impl_->by_digest[digest].get<std::string>();

    std::string joined;
    for (const ChatMessage& message : conversation) {
        joined += message.text;
        joined += '\n';
    }
    for (const Impl::Rule& rule : impl_->rules) {
        bool all = !rule.contains.empty();
        for (const std::string& needle : rule.contains)
            all = all && joined.find(needle) != std::string::npos;
        if (all) return rule.response;
    }
    const std::size_t index = impl_->next_in_sequence.fetch_add(1);
    if (index < impl_->sequence.size()) return impl_->sequence[index];
    if (impl_->fallback) return *impl_->fallback;
    throw TransportError("mock backend: no fixture matches conversation digest " + digest);
}

const std::vector<double>& MockLlmBackend::seen_temperatures() const {
    return impl_->temperatures;
}

// --- live chat-completions adapter ---

struct HttpChatBackend::Impl {
    std::string base_url;
    std::string api_key;
    std::string model;
};

HttpChatBackend::HttpChatBackend(std::string base_url, std::string api_key, std::string model)
    : impl_(new Impl{std::move(base_url), std::move(api_key), std::move(model)}) {}
HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::complete(const Conversation& conversation, double temperature) {
    nlohmann::json body;
    body["model"] = impl_->model;
    body["temperature"] = temperature;
    body["messages"] = nlohmann::json::array();
    for (const ChatMessage& message : conversation)
        body["messages"].push_back({{"role", message.role}, {"content", message.text}});

    httplib::Client client(impl_->base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

    httplib::Result res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw TransportError("chat completion failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw AuthError("chat completion: HTTP " + std::to_string(res->status));
    if (res->status == 429) throw RateLimited("chat completion: HTTP 429");
    if (res->status != 200) throw TransportError("chat completion: HTTP " + std::to_string(res->status));

    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
        !doc["choices"][0].contains("message"))
        throw TransportError("chat completion: unexpected response shape");
    return doc["choices"][0]["message"].value("content", "");
}

} // namespace apollo
