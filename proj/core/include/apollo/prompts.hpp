#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "apollo/email.hpp"
#include "apollo/enrichment.hpp"

namespace apollo {

// A single chat exchange to send: the role/goal preamble (system turn) and
// the payload or follow-up instruction (user turn).
struct PromptText {
    std::string system; // empty for follow-up prompts
    std::string user;

    bool operator==(const PromptText&) const = default;
};

// The closed catalog of phishing features the explanation prompt can be
// primed with.
enum class PrimedFeatureKey { ip_address_url, tld_mispositioned, link_mismatch, young_domain };

struct PrimedFeature {
    PrimedFeatureKey key;
    std::string description; // injected after "suspicious because"

    // Catalog entry with the stock description. Throws Error on an unknown
    // key name.
    static PrimedFeature from_key(std::string_view key_name);
    static PrimedFeature make(PrimedFeatureKey key, std::string description);
};

std::string_view to_string(PrimedFeatureKey key);

struct PromptOptions {
    // Rendered headers are truncated to this many characters with a
    // "[TRUNCATED]" marker; prompts otherwise carry every header.
    std::size_t header_budget = 4000;
};

// Template text (with {placeholders}) the builders render. These are also
// shipped verbatim in data/prompts/.
std::string_view classification_prompt_template();
std::string_view explanation_prompt_template();

// Headers as a one-line {"Name": "value", ...} listing, order preserved,
// duplicates kept.
std::string render_headers(const HeaderMap& headers, std::size_t budget);

// First prompt of the chain: preamble as system text, the email payload in
// [HEADERS]/[SUBJECT]/[BODY] sections as user text; when enrichment is
// present a "URL Information:" block is appended (the server-location line
// is omitted when the country is absent, the VirusTotal block when the
// verdicts are).
PromptText build_classification_prompt(const PreprocessedEmail& email,
                                       const std::optional<UrlEnrichment>& enrichment,
                                       const PromptOptions& options = {});
PromptText build_classification_prompt(const DatasetEmail& email,
                                       const std::optional<UrlEnrichment>& enrichment,
                                       const PromptOptions& options = {});

// Second prompt: unprimed it is the stock explanation request with its
// three few-shot examples; primed, the opening clause becomes "Consider
// that the previous email is suspicious because <description>." with the
// remainder unchanged. Throws Error on an empty primed description.
PromptText build_explanation_prompt(const std::optional<PrimedFeature>& priming = std::nullopt);

} // namespace apollo
