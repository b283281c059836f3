#include "apollo/prompts.hpp"

#include <cstdint>
#include <cstdio>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

constexpr std::string_view kClassificationSystem =
    R"PROMPT(You are a cybersecurity and human-computer interaction expert who has the goal of detecting if an email is legitimate or phishing and helping the user understand why a specific email is dangerous (or genuine) in order to make more informed decisions.

The user will submit the email (headers + subject + body) optionally accompanied by information on the URLs in the email as:
- server location;
- VirusTotal scans reporting the number of scanners that detected the URL as harmless, undetected, malicious.

Your goal is to output a JSON object containing:
- The classification result (label).
- The probability as a percentage of the email being phishing (0%=email is surely legitimate, 100%=email is surely phishing) (phishing_probability).
- A list of persuasion principles that were applied by the alleged attacker (if any); each persuasion principle should be an object containing:
  - the persuasion principle name (authority, scarcity, etc.),
  - the part of the email that makes you say that the persuasion principle is being applied;
  - a brief rationale for each principle.
- A list of 3 to 5 features that could indicate the danger (or legitimacy) of the email; the explanations must be understandable by users with no cybersecurity or computer expertise.

Desired format:
label: <phishing/legit>
phishing_probability: <0-100%>
persuasion_principles: [array of persuasion principles, each having: (name, specific sentences, rationale)]
explanation: [array of 3-5 features explained])PROMPT";

constexpr std::string_view kClassificationUser =
    R"PROMPT(Email:
[HEADERS] {email_headers} [\HEADERS]
[SUBJECT] {email_subject} [\SUBJECT]
[BODY]
{email_body}
[\BODY]

URL Information:
Server location: {url_geolocation}
VirusTotal scan: [
harmless: {n_harmless},
undetected: {n_undetected},
malicious: {n_malicious}
])PROMPT";

// The clause the priming rule rewrites, and what replaces it.
constexpr std::string_view kExplanationOpening =
    "Now take the most relevant feature among the ones in your explanations and construct";
constexpr std::string_view kPrimedOpening = "Consider that the previous email is suspicious because ";

constexpr std::string_view kExplanationPrompt =
    R"PROMPT(Now take the most relevant feature among the ones in your explanations and construct a brief explanation message (max 50 words) directed to naive users (with no knowledge of cybersecurity) that will follow this structure:
1. description of the most relevant phishing feature
2. explanation of the hazard
3. consequences of a successful phishing attack

For example, an explanation that explains that the top-level domain in one of the email's URLs is mispositioned would be:
"In the URL present in the email the top-level domain is in an abnormal position. This could indicate that the URL leads to a fake website. Such websites might steal your personal information".

Another example of an explanation about the domain of a website being suspiciously young would be:
"The URL in the email leads to a website created N days ago. Young websites are famous for criminal activity. There is a potential risk if you proceed."

Another example of explaining that the email is suspicious because of too many special characters in its body would be:
"Many special characters have been detected in the email. Malicious people use them to disguise text and deceive you. Your data could be stolen."

Desired format:
[description of the feature]. [hazard explanation]. [consequences of a successful attack].)PROMPT";

std::string json_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (uint8_t(c) < 0x20) {
                char buffer[8];
                std::snprintf(buffer, sizeof buffer, "\\u%04x", c);
                out += buffer;
            } else {
                out += c;
            }
        }
    }
    return out;
}

} // namespace

std::string_view to_string(PrimedFeatureKey key) {
    switch (key) {
    case PrimedFeatureKey::ip_address_url: return "ip_address_url";
    case PrimedFeatureKey::tld_mispositioned: return "tld_mispositioned";
    case PrimedFeatureKey::link_mismatch: return "link_mismatch";
    case PrimedFeatureKey::young_domain: return "young_domain";
    }
    return "?";
}

PrimedFeature PrimedFeature::make(PrimedFeatureKey key, std::string description) {
    if (description.empty()) throw Error("primed feature description must not be empty");
    return PrimedFeature{key, std::move(description)};
}

PrimedFeature PrimedFeature::from_key(std::string_view key_name) {
    if (key_name == "ip_address_url")
        return make(PrimedFeatureKey::ip_address_url,
                    "a URL in the email is an IP address instead of a normal hostname");
    if (key_name == "tld_mispositioned")
        return make(PrimedFeatureKey::tld_mispositioned,
                    "the top-level domain of a URL in the email is mispositioned (as in \"www.amazon.com.cz\")");
    if (key_name == "link_mismatch")
        return make(PrimedFeatureKey::link_mismatch,
                    "there is a mismatch between a link shown in the email and its actual destination");
    if (key_name == "young_domain")
        return make(PrimedFeatureKey::young_domain, "a URL in the email points to a very young domain");
    throw Error("unknown primed feature key: " + std::string(key_name));
}

std::string_view classification_prompt_template() {
    static const std::string full =
        std::string(kClassificationSystem) + "\n\n" + std::string(kClassificationUser) + "\n";
    return full;
}

std::string_view explanation_prompt_template() {
    static const std::string full = std::string(kExplanationPrompt) + "\n";
    return full;
}

std::string render_headers(const HeaderMap& headers, std::size_t budget) {
    if (headers.empty()) return {};
    std::string out = "{";
    bool first = true;
    for (const auto& [name, value] : headers.entries()) {
        if (!first) out += ", ";
        first = false;
        out += '"' + json_escape(name) + "\": \"" + json_escape(value) + '"';
    }
    out += '}';
    if (out.size() > budget) {
        out.resize(budget);
        out += "[TRUNCATED]";
    }
    return out;
}

PromptText build_classification_prompt(const PreprocessedEmail& email,
                                       const std::optional<UrlEnrichment>& enrichment,
                                       const PromptOptions& options) {
    const std::string headers = render_headers(email.headers, options.header_budget);

    std::string user = "Email:\n";
    user += headers.empty() ? "[HEADERS] [\\HEADERS]" : "[HEADERS] " + headers + " [\\HEADERS]";
    user += "\n[SUBJECT] " + email.subject + " [\\SUBJECT]";
    user += "\n[BODY]\n" + email.body + "\n[\\BODY]";

    if (enrichment && (enrichment->country || enrichment->verdicts)) {
        user += "\n\nURL Information:";
        if (enrichment->country) user += "\nServer location: " + *enrichment->country;
        if (enrichment->verdicts) {
            const VtVerdicts& v = *enrichment->verdicts;
            user += "\nVirusTotal scan: [";
            user += "\nharmless: " + std::to_string(v.n_harmless) + ",";
            user += "\nundetected: " + std::to_string(v.n_undetected) + ",";
            user += "\nmalicious: " + std::to_string(v.n_malicious);
            user += "\n]";
        }
    }
    return PromptText{std::string(kClassificationSystem), std::move(user)};
}

PromptText build_classification_prompt(const DatasetEmail& email,
                                       const std::optional<UrlEnrichment>& enrichment,
                                       const PromptOptions& options) {
    return build_classification_prompt(to_preprocessed(email), enrichment, options);
}

PromptText build_explanation_prompt(const std::optional<PrimedFeature>& priming) {
    std::string user(kExplanationPrompt);
    if (priming) {
        if (priming->description.empty()) throw Error("primed feature description must not be empty");
        user.replace(0, kExplanationOpening.size(),
                     std::string(kPrimedOpening) + priming->description + ". Construct");
    }
    return PromptText{{}, std::move(user)};
}

} // namespace apollo
