#include "apollo/service.hpp"

#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "apollo/body_text.hpp"
#include "apollo/encoding.hpp"
#include "apollo/eml.hpp"
#include "apollo/errors.hpp"

namespace apollo {

std::string verdict_json(const ChainResult& chain, const std::optional<PrimedFeatureKey>& primed) {
    const ClassificationOutcome& outcome = chain.outcome;
    nlohmann::json doc;
    doc["label"] = std::string(to_string(outcome.label));
    doc["phishing_probability"] = outcome.phishing_probability;
    doc["persuasion_principles"] = nlohmann::json::array();
    for (const PersuasionPrinciple& p : outcome.persuasion_principles)
        doc["persuasion_principles"].push_back(
            {{"name", p.name}, {"evidence", p.evidence}, {"rationale", p.rationale}});
    doc["explanation"] = outcome.explanation_features;

    if (chain.explanation) {
        const WarningMessage message = WarningMessage::from_text(*chain.explanation, primed);
        const ValidationReport report = validate_warning(message.text);
        doc["warning"] = nlohmann::json::parse(payload_to_json(make_warning_payload(outcome, message)));
        doc["warning_validation"] = {{"ok", report.ok},
                                     {"violations", report.violations},
                                     {"word_count", report.word_count},
                                     {"sentence_count", report.sentence_count}};
    } else {
        doc["warning"] = nullptr;
        doc["warning_validation"] = nullptr;
    }
    return doc.dump(2);
}

struct ClassifyService::Impl {
    Options options;
    httplib::Server server;
    std::thread thread;

    explicit Impl(Options opts) : options(std::move(opts)) {
        server.Get("/healthz",
                   [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
        server.Post("/classify",
                    [this](const httplib::Request& req, httplib::Response& res) { handle_classify(req, res); });
    }

    static void set_error(httplib::Response& res, int status, const std::string& type,
                          const std::string& message) {
        res.status = status;
        res.set_content(nlohmann::json{{"error", {{"type", type}, {"message", message}}}}.dump(2),
                        "application/json");
    }

    void handle_classify(const httplib::Request& req, httplib::Response& res) {
        nlohmann::json body = nlohmann::json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (body.is_discarded() || !body.is_object())
            return set_error(res, 400, "BadRequest", "request body is not a JSON object");

        PreprocessedEmail email;
        try {
            if (body.contains("eml_base64")) {
                std::string bytes;
                if (!body["eml_base64"].is_string() ||
                    !base64_decode(body["eml_base64"].get<std::string>(), bytes))
                    return set_error(res, 400, "BadRequest", "eml_base64 is not valid base64");
                email = parse_eml(bytes);
            } else if (body.contains("body")) {
                if (body.contains("headers") && body["headers"].is_object())
                    for (const auto& [name, value] : body["headers"].items())
                        email.headers.add(name, value.get<std::string>());
                const std::string subject = body.value("subject", "");
                email.subject = subject.empty() ? "NO SUBJECT" : subject;
                PreprocessedBody processed = preprocess_body(body["body"].get<std::string>());
                email.body = std::move(processed.body);
                email.urls = std::move(processed.urls);
                if (body.contains("urls") && body["urls"].is_array()) {
                    email.urls.clear();
                    for (const auto& url : body["urls"]) email.urls.push_back(url.get<std::string>());
                }
            } else {
                return set_error(res, 400, "BadRequest", "expected eml_base64 or email fields");
            }
        } catch (const MalformedMessage& e) {
            return set_error(res, 400, "MalformedMessage", e.what());
        } catch (const EmptyBody& e) {
            return set_error(res, 400, "EmptyBody", e.what());
        } catch (const nlohmann::json::exception& e) {
            return set_error(res, 400, "BadRequest", e.what());
        }

        try {
            std::optional<UrlEnrichment> enrichment;
            if (options.enricher && options.enrich_kind == EnrichMode::Kind::live) {
                // fail fast instead of queueing requests behind the limiter
                enrichment = options.enricher->enrich(email, EnrichMode::live(), /*wait_for_slot=*/false);
            }
            ChainOptions chain_options;
            chain_options.temperature = options.config.llm_temperature;
            chain_options.prompt.header_budget = options.config.header_budget;
            const ChainResult chain =
                classify_and_explain(email, enrichment, *options.backend, std::nullopt, chain_options);
            res.set_content(verdict_json(chain), "application/json");
        } catch (const RateLimited& e) {
            set_error(res, 429, "RateLimited", e.what());
        } catch (const BackendError& e) {
            set_error(res, 502, "BackendError", e.what());
        } catch (const ResponseFormatError& e) {
            set_error(res, 502, "ResponseFormatError", e.what());
        } catch (const Error& e) {
            set_error(res, 400, "Error", e.what());
        }
    }
};

ClassifyService::ClassifyService(Options options) : impl_(new Impl(std::move(options))) {
    if (!impl_->options.backend) throw Error("ClassifyService needs a backend");
}

ClassifyService::~ClassifyService() { stop(); }

int ClassifyService::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw IoError("cannot bind " + host);
    } else {
        if (!impl_->server.bind_to_port(host, port)) throw IoError("cannot bind " + host);
    }
    impl_->thread = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void ClassifyService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (impl_ && impl_->thread.joinable()) impl_->thread.join();
}

} // namespace apollo
