#include "apollo/classify.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

// First balanced top-level JSON object in `raw` that actually parses.
nlohmann::json extract_first_object(const std::string& raw) {
    std::size_t start = raw.find('{');
    while (start != std::string::npos) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < raw.size(); ++i) {
            const char c = raw[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    nlohmann::json parsed = nlohmann::json::parse(
                        raw.substr(start, i - start + 1), nullptr, /*allow_exceptions=*/false);
                    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                    break;
                }
            }
        }
        start = raw.find('{', start + 1);
    }
    throw NoJsonFound("no JSON object in backend response");
}

double normalize_probability(const nlohmann::json& value) {
    double v = 0;
    if (value.is_number()) {
        v = value.get<double>();
    } else if (value.is_string()) {
        std::string text = value.get<std::string>();
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.erase(0, 1);
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.pop_back();
        if (!text.empty() && text.back() == '%') text.pop_back();
        const char* begin = text.c_str();
        char* end = nullptr;
        v = std::strtod(begin, &end);
        if (end == begin || *end != '\0') throw ProbabilityOutOfRange(value.get<std::string>());
    } else {
        throw MissingField("phishing_probability");
    }
    if (!(v >= 0.0 && v <= 100.0)) throw ProbabilityOutOfRange(value.dump());
    return v / 100.0;
}

std::string string_field(const nlohmann::json& object, std::initializer_list<const char*> names,
                         const std::string& error_name) {
    for (const char* name : names) {
        if (object.contains(name) && object[name].is_string()) {
            std::string value = object[name].get<std::string>();
            if (!value.empty()) return value;
        }
    }
    throw MissingField(error_name);
}

} // namespace

ClassificationOutcome parse_classification_response(const std::string& raw) {
    const nlohmann::json doc = extract_first_object(raw);

    ClassificationOutcome outcome;
    if (!doc.contains("label") || !doc["label"].is_string()) throw MissingField("label");
    const std::string label_text = doc["label"].get<std::string>();
    const auto label = label_from_string(label_text);
    if (!label) throw BadLabel(label_text);
    outcome.label = *label;

    if (!doc.contains("phishing_probability")) throw MissingField("phishing_probability");
    outcome.phishing_probability = normalize_probability(doc["phishing_probability"]);

    if (!doc.contains("persuasion_principles") || !doc["persuasion_principles"].is_array())
        throw MissingField("persuasion_principles");
    std::size_t index = 0;
    for (const auto& item : doc["persuasion_principles"]) {
        const std::string at = "persuasion_principles[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw MissingField(at);
        PersuasionPrinciple principle;
        principle.name = string_field(item, {"name"}, at + ".name");
        principle.evidence =
            string_field(item, {"evidence", "specific_sentences", "sentences", "part"}, at + ".evidence");
        principle.rationale = string_field(item, {"rationale"}, at + ".rationale");
        outcome.persuasion_principles.push_back(std::move(principle));
    }

    if (!doc.contains("explanation") || !doc["explanation"].is_array())
        throw MissingField("explanation");
    const std::size_t n = doc["explanation"].size();
    if (n < 3 || n > 5) throw ExplanationCountOutOfBounds(n);
    for (const auto& item : doc["explanation"]) {
        if (!item.is_string()) throw MissingField("explanation");
        outcome.explanation_features.push_back(item.get<std::string>());
    }
    return outcome;
}

std::string serialize_outcome(const ClassificationOutcome& outcome) {
    nlohmann::json doc;
    doc["label"] = std::string(to_string(outcome.label));
    doc["phishing_probability"] = outcome.phishing_probability * 100.0;
    doc["persuasion_principles"] = nlohmann::json::array();
    for (const PersuasionPrinciple& p : outcome.persuasion_principles)
        doc["persuasion_principles"].push_back(
            {{"name", p.name}, {"evidence", p.evidence}, {"rationale", p.rationale}});
    doc["explanation"] = outcome.explanation_features;
    return doc.dump();
}

namespace {

std::string complete_with_retry(LlmBackend& backend, const Conversation& conversation,
                                const ChainOptions& options) {
    int attempts_left = options.transport_retries + 1;
    for (;;) {
        try {
            return backend.complete(conversation, options.temperature);
        } catch (const TransportError&) {
            if (--attempts_left <= 0) throw;
        }
    }
}

} // namespace

ChainResult classify_and_explain(const PreprocessedEmail& email,
                                 const std::optional<UrlEnrichment>& enrichment, LlmBackend& backend,
                                 const std::optional<PrimedFeature>& priming,
                                 const ChainOptions& options) {
    const PromptText first = build_classification_prompt(email, enrichment, options.prompt);

    ChainResult result;
    if (!first.system.empty()) result.conversation.push_back({"system", first.system});
    result.conversation.push_back({"user", first.user});

    const std::string response = complete_with_retry(backend, result.conversation, options);
    result.outcome = parse_classification_response(response);
    result.conversation.push_back({"assistant", response});

    if (priming || result.outcome.label == Label::phishing) {
        const PromptText second = build_explanation_prompt(priming);
        result.conversation.push_back({"user", second.user});
        const std::string explanation = complete_with_retry(backend, result.conversation, options);
        result.conversation.push_back({"assistant", explanation});
        result.explanation = explanation;
    }
    return result;
}

ClassificationOutcome classify_only(const DatasetEmail& email,
                                    const std::optional<UrlEnrichment>& enrichment, LlmBackend& backend,
                                    const ChainOptions& options) {
    const PromptText first = build_classification_prompt(email, enrichment, options.prompt);
    Conversation conversation;
    if (!first.system.empty()) conversation.push_back({"system", first.system});
    conversation.push_back({"user", first.user});
    return parse_classification_response(complete_with_retry(backend, conversation, options));
}

} // namespace apollo
