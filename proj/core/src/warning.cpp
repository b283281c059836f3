#include "apollo/warning.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::size_t count_words(const std::string& text) {
    std::size_t count = 0;
    bool in_token = false;
    for (char c : text) {
        if (is_space(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

std::vector<std::string> split_sentences(const std::string& text) {
    // A sentence ends at . ! or ? followed by whitespace or end of text.
    // Abbreviations are not special-cased; explanations are plain prose.
    std::vector<std::string> sentences;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        current += c;
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == text.size() || is_space(text[i + 1]))) {
            const std::string trimmed = trim(current);
            if (!trimmed.empty()) sentences.push_back(trimmed);
            current.clear();
        }
    }
    const std::string tail = trim(current);
    if (!tail.empty()) sentences.push_back(tail);
    return sentences;
}

WarningMessage WarningMessage::from_text(std::string text, std::optional<PrimedFeatureKey> primed) {
    WarningMessage message;
    message.text = std::move(text);
    message.word_count = count_words(message.text);
    message.primed_feature = primed;
    const std::vector<std::string> sentences = split_sentences(message.text);
    if (sentences.size() == 3)
        message.parts = Parts{sentences[0], sentences[1], sentences[2]};
    return message;
}

ValidationReport validate_warning(const std::string& text) {
    ValidationReport report;
    report.word_count = count_words(text);
    report.sentence_count = split_sentences(text).size();

    if (trim(text).empty()) report.violations.push_back("empty message");
    if (report.word_count > 50)
        report.violations.push_back("word_count=" + std::to_string(report.word_count) +
                                    " exceeds the 50-word limit");
    if (!trim(text).empty() && (report.sentence_count < 2 || report.sentence_count > 4))
        report.violations.push_back("sentence_count=" + std::to_string(report.sentence_count) +
                                    " outside the 2-4 range of the three-part format");
    report.ok = report.violations.empty();
    return report;
}

WarningPayload make_warning_payload(const ClassificationOutcome& outcome, const WarningMessage& message) {
    WarningPayload payload;
    payload.message = message;
    payload.probability = outcome.phishing_probability;
    return payload;
}

std::string payload_to_json(const WarningPayload& payload) {
    nlohmann::json doc;
    doc["severity"] = payload.severity;
    doc["title"] = payload.title;
    doc["message"]["text"] = payload.message.text;
    doc["message"]["word_count"] = payload.message.word_count;
    if (payload.message.primed_feature)
        doc["message"]["primed_feature"] = std::string(to_string(*payload.message.primed_feature));
    else
        doc["message"]["primed_feature"] = nullptr;
    doc["actions"] = payload.actions;
    doc["probability"] = payload.probability;
    return doc.dump(2);
}

std::string render_warning(const ClassificationOutcome& outcome, const WarningMessage& message,
                           RenderFormat format) {
    if (outcome.label == Label::legit && !message.primed_feature)
        throw RenderPrecondition("refusing to render a warning for an unprimed legit verdict");

    const WarningPayload payload = make_warning_payload(outcome, message);
    switch (format) {
    case RenderFormat::json:
        return payload_to_json(payload);
    case RenderFormat::text: {
        std::ostringstream out;
        out << "!! " << payload.title << " !!\n\n"
            << payload.message.text << "\n\n"
            << "Estimated phishing probability: " << int(payload.probability * 100 + 0.5) << "%\n";
        for (std::size_t i = 0; i < payload.actions.size(); ++i)
            out << "  [" << (i + 1) << "] " << payload.actions[i] << "\n";
        return out.str();
    }
    case RenderFormat::html: {
        // The explanation sits in the middle section of the dialog, embedded
        // verbatim; title and actions are escaped.
        std::ostringstream out;
        out << "<div class=\"phishing-warning\" role=\"alertdialog\" data-severity=\""
            << payload.severity << "\">\n"
            << "  <h1>" << html_escape(payload.title) << "</h1>\n"
            << "  <p class=\"explanation\">" << payload.message.text << "</p>\n"
            << "  <div class=\"actions\">\n";
        for (std::size_t i = 0; i < payload.actions.size(); ++i)
            out << "    <button class=\"" << (i == 0 ? "safe" : "unsafe") << "\">"
                << html_escape(payload.actions[i]) << "</button>\n";
        out << "  </div>\n</div>\n";
        return out.str();
    }
    }
    throw Error("unreachable render format");
}

} // namespace apollo
