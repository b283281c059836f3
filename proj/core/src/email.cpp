#include "apollo/email.hpp"

#include "apollo/body_text.hpp"

namespace apollo {

std::string_view to_string(Label label) {
    return label == Label::phishing ? "phishing" : "legit";
}

std::optional<Label> label_from_string(std::string_view text) {
    std::string lower(text);
    for (char& c : lower)
        if (c >= 'A' && c <= 'Z') c += 32;
    if (lower == "phishing") return Label::phishing;
    if (lower == "legit" || lower == "legitimate") return Label::legit;
    return std::nullopt;
}

std::optional<std::string_view> HeaderMap::get(std::string_view name) const {
    for (const auto& [key, value] : entries_) {
        if (key.size() != name.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < key.size() && match; ++i) {
            char a = key[i], b = name[i];
            if (a >= 'A' && a <= 'Z') a += 32;
            if (b >= 'A' && b <= 'Z') b += 32;
            match = a == b;
        }
        if (match) return value;
    }
    return std::nullopt;
}

PreprocessedEmail to_preprocessed(const DatasetEmail& email) {
    PreprocessedEmail out;
    if (!email.sender.empty()) out.headers.add("From", email.sender);
    if (!email.receiver.empty()) out.headers.add("To", email.receiver);
    if (!email.date.empty()) out.headers.add("Date", email.date);
    out.subject = email.subject.empty() ? "NO SUBJECT" : email.subject;
    out.body = preprocess_body(email.body).body;
    out.urls = email.urls;
    return out;
}

} // namespace apollo
