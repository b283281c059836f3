#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apollo/classify.hpp"
#include "apollo/prompts.hpp"

namespace apollo {

// A generated explanation plus its structural breakdown. Valid messages
// stay within 50 words and read as feature + hazard + consequence.
struct WarningMessage {
    std::string text;
    std::size_t word_count = 0; // whitespace tokens
    struct Parts {
        std::string feature;
        std::string hazard;
        std::string consequence;
    };
    std::optional<Parts> parts; // set when the text splits into exactly 3 sentences
    std::optional<PrimedFeatureKey> primed_feature;

    static WarningMessage from_text(std::string text,
                                    std::optional<PrimedFeatureKey> primed = std::nullopt);
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::size_t word_count = 0;
    std::size_t sentence_count = 0;
};

// Checks the explanation against the structural rules: non-empty, at most
// 50 words, 2 to 4 sentences (the three-part format, tolerating one split
// part). Never throws; violations are listed individually.
ValidationReport validate_warning(const std::string& text);

std::size_t count_words(const std::string& text);
std::vector<std::string> split_sentences(const std::string& text);

// Render payload for consuming clients (dialog-style warning).
struct WarningPayload {
    std::string severity = "danger";
    std::string title = "Suspicious email detected";
    WarningMessage message;
    std::vector<std::string> actions = {"Back to safety", "Proceed anyway"}; // safe action first
    double probability = 0.0;
};

enum class RenderFormat { json, text, html };

// Emits the payload: json is the schema verbatim, text a terminal block,
// html a standalone dialog snippet with the message in the middle section.
// The message text is embedded byte-identically in every format. Throws
// RenderPrecondition when asked to render an unprimed legit outcome.
std::string render_warning(const ClassificationOutcome& outcome, const WarningMessage& message,
                           RenderFormat format);

WarningPayload make_warning_payload(const ClassificationOutcome& outcome, const WarningMessage& message);
std::string payload_to_json(const WarningPayload& payload);

} // namespace apollo
