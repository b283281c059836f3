#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace apollo {

// Ground-truth / predicted class of an email.
enum class Label { phishing, legit };

std::string_view to_string(Label label);
// Accepts "phishing", "legit" (and "legitimate" as an alias). Returns
// nullopt otherwise.
std::optional<Label> label_from_string(std::string_view text);

// Header list preserving source order; lookups are case-insensitive and
// duplicates (Received, ...) are kept.
class HeaderMap {
public:
    using Entry = std::pair<std::string, std::string>;

    void add(std::string name, std::string value) {
        entries_.emplace_back(std::move(name), std::move(value));
    }
    std::optional<std::string_view> get(std::string_view name) const;
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool operator==(const HeaderMap&) const = default;

private:
    std::vector<Entry> entries_;
};

// Normalized form an email takes after ingestion: decoded headers, a
// non-empty subject, a tag-free whitespace-collapsed body, and the URLs in
// order of first appearance.
struct PreprocessedEmail {
    HeaderMap headers;
    std::string subject;
    std::string body;
    std::vector<std::string> urls;
};

// One row of the evaluation dataset.
struct DatasetEmail {
    long id = 0;
    std::string body;
    std::string sender;
    std::string receiver;
    std::string date;
    std::string subject;
    std::vector<std::string> urls;
    Label label = Label::legit;

    bool operator==(const DatasetEmail&) const = default;
};

// Adapts a dataset row to the pipeline's normalized representation: sender /
// receiver / date become From / To / Date headers, the body goes through the
// same tag-strip and collapse pass as .eml bodies, and the row's explicit
// urls column is authoritative.
PreprocessedEmail to_preprocessed(const DatasetEmail& email);

} // namespace apollo
