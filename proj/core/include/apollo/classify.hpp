#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apollo/email.hpp"
#include "apollo/enrichment.hpp"
#include "apollo/llm.hpp"
#include "apollo/prompts.hpp"

namespace apollo {

struct PersuasionPrinciple {
    std::string name;      // authority, scarcity, ...
    std::string evidence;  // the quoted email fragment
    std::string rationale;

    bool operator==(const PersuasionPrinciple&) const = default;
};

// Parsed first-prompt response.
struct ClassificationOutcome {
    Label label = Label::legit;
    double phishing_probability = 0.0; // normalized to [0,1]
    std::vector<PersuasionPrinciple> persuasion_principles;
    std::vector<std::string> explanation_features; // 3 to 5 entries

    bool operator==(const ClassificationOutcome&) const = default;
};

// Extracts the first balanced JSON object from `raw` (prose and code
// fences around it are fine) and validates it. The backend emits the
// probability as 0-100 or "n%"; it is stored normalized to [0,1].
// Throws NoJsonFound, MissingField, BadLabel, ProbabilityOutOfRange,
// ExplanationCountOutOfBounds.
ClassificationOutcome parse_classification_response(const std::string& raw);

// Inverse of parse_classification_response modulo probability rounding:
// emits the canonical response JSON (probability back on the 0-100 scale).
std::string serialize_outcome(const ClassificationOutcome& outcome);

struct ChainOptions {
    double temperature = 0.0001;
    // One retry on transport failure; parse failures are never retried.
    int transport_retries = 1;
    PromptOptions prompt;
};

struct ChainResult {
    ClassificationOutcome outcome;
    // Raw second-prompt text; absent when the chain short-circuits (legit
    // verdict without priming).
    std::optional<std::string> explanation;
    Conversation conversation; // full transcript, for audits/tests
};

// Runs the two-prompt chain: classification first, then - staying in the
// same conversation - the explanation request. The second call is issued
// for phishing verdicts, and for any verdict when priming is supplied
// (forced false-positive explanations).
ChainResult classify_and_explain(const PreprocessedEmail& email,
                                 const std::optional<UrlEnrichment>& enrichment, LlmBackend& backend,
                                 const std::optional<PrimedFeature>& priming = std::nullopt,
                                 const ChainOptions& options = {});

// Classification-only variant used by the evaluation harness (the second
// prompt is not needed to measure classification performance).
ClassificationOutcome classify_only(const DatasetEmail& email,
                                    const std::optional<UrlEnrichment>& enrichment, LlmBackend& backend,
                                    const ChainOptions& options = {});

} // namespace apollo
