#pragma once

#include <memory>
#include <optional>
#include <string>

#include "apollo/classify.hpp"
#include "apollo/config.hpp"
#include "apollo/enricher.hpp"
#include "apollo/llm.hpp"
#include "apollo/warning.hpp"

namespace apollo {

// The verdict JSON shared by the CLI and the HTTP service: outcome fields
// plus the warning payload and its validation when an explanation was
// generated.
std::string verdict_json(const ChainResult& chain,
                         const std::optional<PrimedFeatureKey>& primed = std::nullopt);

// Minimal classify endpoint:
//   POST /classify  {"eml_base64": "..."} or
//                   {"subject": ..., "body": ..., "headers": {...}, "urls": [...]}
//   GET  /healthz   -> 200 "ok"
// Stateless per request; 400 on malformed requests, 502 on backend
// failures, 429 when the enrichment limiter would be exceeded.
class ClassifyService {
public:
    struct Options {
        AppConfig config;
        std::shared_ptr<LlmBackend> backend;
        std::shared_ptr<Enricher> enricher; // may be null when enrichment is off
        EnrichMode::Kind enrich_kind = EnrichMode::Kind::off;
    };

    explicit ClassifyService(Options options);
    ~ClassifyService();

    // Binds an ephemeral port and serves in a background thread; returns
    // the port. Throws IoError when binding fails.
    int start(const std::string& host, int port = 0);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace apollo
