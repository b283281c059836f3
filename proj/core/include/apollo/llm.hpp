#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace apollo {

struct ChatMessage {
    std::string role; // "system" | "user" | "assistant"
    std::string text;

    bool operator==(const ChatMessage&) const = default;
};

using Conversation = std::vector<ChatMessage>;

// Stable 64-bit FNV-1a digest of a conversation, as 16 lowercase hex
// digits. Mock fixtures can key responses on it.
std::string conversation_digest(const Conversation& conversation);

// Chat backend contract. complete() returns the assistant's raw text for
// the given conversation. concurrent_ok() declares whether parallel
// complete() calls are permitted.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string complete(const Conversation& conversation, double temperature) = 0;
    virtual bool concurrent_ok() const { return false; }
};

// Deterministic scripted backend. Fixtures are a JSON file (or document):
//   {
//     "by_digest": {"<conversation digest>": "response text"},
//     "rules": [{"contains": ["substr", ...], "response": "..."}, ...],
//     "sequence": ["first response", "second response", ...],
//     "default": "fallback response"
//   }
// Lookup order: by_digest, first rule whose substrings all occur in the
// conversation, sequence (consumed call by call), default. A miss throws
// TransportError. Everything except the sequence is a pure function of
// (fixtures, conversation).
class MockLlmBackend : public LlmBackend {
public:
    static MockLlmBackend from_file(const std::filesystem::path& path);
    static MockLlmBackend from_json_text(const std::string& json_text);

    MockLlmBackend(MockLlmBackend&&) noexcept;
    MockLlmBackend& operator=(MockLlmBackend&&) noexcept;
    ~MockLlmBackend() override;

    std::string complete(const Conversation& conversation, double temperature) override;
    bool concurrent_ok() const override { return true; }

    // Temperatures seen by complete(), for tests.
    const std::vector<double>& seen_temperatures() const;

private:
    MockLlmBackend();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Adapter for a chat-completions style HTTP API:
// POST {base_url}/v1/chat/completions with {model, temperature, messages}.
class HttpChatBackend : public LlmBackend {
public:
    HttpChatBackend(std::string base_url, std::string api_key, std::string model);
    ~HttpChatBackend() override;

    std::string complete(const Conversation& conversation, double temperature) override;
    bool concurrent_ok() const override { return true; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace apollo
