#include "apollo/body_text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace apollo {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char a = s[i], b = prefix[i];
        if (a >= 'A' && a <= 'Z') a += 32;
        if (b >= 'A' && b <= 'Z') b += 32;
        if (a != b) return false;
    }
    return true;
}

// Tags that read as line breaks once markup is gone.
const std::unordered_set<std::string>& block_tags() {
    static const std::unordered_set<std::string> tags = {
        "br", "hr", "p", "div", "li", "ul", "ol", "tr", "table", "thead", "tbody",
        "h1", "h2", "h3", "h4", "h5", "h6", "blockquote", "pre", "title",
        "section", "article", "header", "footer", "dt", "dd"};
    return tags;
}

void append_codepoint(std::string& out, uint32_t cp) {
    if (cp <= 0x7F) {
        out += char(cp);
    } else if (cp <= 0x7FF) {
        out += char(0xC0 | (cp >> 6));
        out += char(0x80 | (cp & 0x3F));
    } else if (cp <= 0xFFFF) {
        out += char(0xE0 | (cp >> 12));
        out += char(0x80 | ((cp >> 6) & 0x3F));
        out += char(0x80 | (cp & 0x3F));
    } else {
        out += char(0xF0 | (cp >> 18));
        out += char(0x80 | ((cp >> 12) & 0x3F));
        out += char(0x80 | ((cp >> 6) & 0x3F));
        out += char(0x80 | (cp & 0x3F));
    }
}

const std::unordered_map<std::string, uint32_t>& named_entities() {
    static const std::unordered_map<std::string, uint32_t> map = {
        {"amp", '&'},     {"lt", '<'},      {"gt", '>'},      {"quot", '"'},
        {"apos", '\''},   {"nbsp", ' '},    {"copy", 0xA9},   {"reg", 0xAE},
        {"trade", 0x2122},{"mdash", 0x2014},{"ndash", 0x2013},{"hellip", 0x2026},
        {"lsquo", 0x2018},{"rsquo", 0x2019},{"ldquo", 0x201C},{"rdquo", 0x201D},
        {"euro", 0x20AC}, {"pound", 0xA3},  {"yen", 0xA5},    {"cent", 0xA2},
        {"sect", 0xA7},   {"middot", 0xB7}, {"bull", 0x2022}, {"deg", 0xB0},
        {"plusmn", 0xB1}, {"times", 0xD7},  {"divide", 0xF7},
    };
    return map;
}

// Decodes "&name;" / "&#NN;" / "&#xHH;" at position i (pointing at '&').
// Returns number of input bytes consumed, or 0 if not an entity.
// When `in_text` is set, an entity resolving to '<' is left encoded so the
// stripped body cannot re-introduce something tag-shaped.
std::size_t decode_entity(std::string_view s, std::size_t i, bool in_text, std::string& out) {
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) return 0;
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    uint32_t cp = 0;
    if (!name.empty() && name[0] == '#') {
        std::size_t k = 1;
        int base = 10;
        if (k < name.size() && (name[k] == 'x' || name[k] == 'X')) {
            base = 16;
            ++k;
        }
        if (k >= name.size()) return 0;
        for (; k < name.size(); ++k) {
            const char c = name[k];
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else return 0;
            cp = cp * uint32_t(base) + uint32_t(d);
            if (cp > 0x10FFFF) return 0;
        }
    } else {
        const auto it = named_entities().find(std::string(name));
        if (it == named_entities().end()) return 0;
        cp = it->second;
    }
    if (cp == 0) return 0;
    if (in_text && cp == '<') return 0; // keep encoded
    append_codepoint(out, cp);
    return semi - i + 1;
}

std::string decode_entities(std::string_view s, bool in_text) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            const std::size_t used = decode_entity(s, i, in_text, out);
            if (used > 0) {
                i += used;
                continue;
            }
        }
        out += s[i++];
    }
    return out;
}

struct Tag {
    std::string name;       // lowercased
    bool closing = false;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::size_t end = 0;    // index one past '>'
};

// Parses a tag starting at `pos` ('<'). Returns nullopt when the '<' does
// not open a tag. Unterminated tags swallow the rest of the input.
std::optional<Tag> parse_tag(std::string_view s, std::size_t pos) {
    std::size_t i = pos + 1;
    if (i >= s.size()) return std::nullopt;
    Tag tag;
    if (s[i] == '!' || s[i] == '?') {
        // comment, doctype, processing instruction
        if (s.compare(i, 3, "!--") == 0) {
            const std::size_t close = s.find("-->", i + 3);
            tag.end = close == std::string_view::npos ? s.size() : close + 3;
        } else {
            const std::size_t close = s.find('>', i);
            tag.end = close == std::string_view::npos ? s.size() : close + 1;
        }
        tag.name = "!";
        return tag;
    }
    if (s[i] == '/') {
        tag.closing = true;
        ++i;
    }
    if (i >= s.size() || !is_alpha(s[i])) return std::nullopt;
    std::size_t name_end = i;
    while (name_end < s.size() && (is_alpha(s[name_end]) || (s[name_end] >= '0' && s[name_end] <= '9')))
        ++name_end;
    tag.name = ascii_lower(s.substr(i, name_end - i));
    i = name_end;

    // attributes
    while (i < s.size() && s[i] != '>') {
        if (is_blank(s[i]) || s[i] == '\n' || s[i] == '\r' || s[i] == '/') {
            ++i;
            continue;
        }
        std::size_t key_begin = i;
        while (i < s.size() && s[i] != '=' && s[i] != '>' && !is_blank(s[i]) && s[i] != '\n' && s[i] != '\r')
            ++i;
        std::string key = ascii_lower(s.substr(key_begin, i - key_begin));
        std::string value;
        while (i < s.size() && (is_blank(s[i]) || s[i] == '\n' || s[i] == '\r')) ++i;
        if (i < s.size() && s[i] == '=') {
            ++i;
            while (i < s.size() && (is_blank(s[i]) || s[i] == '\n' || s[i] == '\r')) ++i;
            if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
                const char quote = s[i++];
                const std::size_t v_begin = i;
                while (i < s.size() && s[i] != quote) ++i;
                value = std::string(s.substr(v_begin, i - v_begin));
                if (i < s.size()) ++i;
            } else {
                const std::size_t v_begin = i;
                while (i < s.size() && !is_blank(s[i]) && s[i] != '>' && s[i] != '\n' && s[i] != '\r')
                    ++i;
                value = std::string(s.substr(v_begin, i - v_begin));
            }
        }
        if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
    }
    tag.end = i < s.size() ? i + 1 : s.size();
    return tag;
}

enum class AnchorKind { web, email, phone, plain };

struct Segment {
    bool is_anchor = false;
    std::string text;               // decoded text / anchor visible text
    std::string href;               // web anchors only
    AnchorKind kind = AnchorKind::plain;
};

bool is_web_url(std::string_view href) {
    const std::size_t sep = href.find("://");
    if (sep == std::string_view::npos || sep == 0) return false;
    if (!is_alpha(href[0])) return false;
    for (std::size_t i = 1; i < sep; ++i) {
        const char c = href[i];
        if (!is_alpha(c) && !(c >= '0' && c <= '9') && c != '+' && c != '-' && c != '.')
            return false;
    }
    const std::size_t host_begin = sep + 3;
    std::size_t host_end = host_begin;
    while (host_end < href.size() && href[host_end] != '/' && href[host_end] != '?' && href[host_end] != '#')
        ++host_end;
    return host_end > host_begin;
}

// URL characters for the bare-text scan. Brackets are excluded so that
// bracket-wrapped links in prose do not bleed into the captured URL.
bool is_bare_url_char(char c) {
    const uint8_t b = uint8_t(c);
    if (b >= 0x80) return true;
    if (b <= ' ') return false;
    switch (c) {
    case '<': case '>': case '"': case '`': case '[': case ']': case '{': case '}':
        return false;
    default:
        return true;
    }
}

void scan_bare_urls(std::string_view text, std::vector<std::string>& urls) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_alpha(text[i]) ||
            (i > 0 && (is_alpha(text[i - 1]) || (text[i - 1] >= '0' && text[i - 1] <= '9') ||
                       text[i - 1] == '+' || text[i - 1] == '-' || text[i - 1] == '.'))) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && (is_alpha(text[j]) || (text[j] >= '0' && text[j] <= '9') ||
                         text[j] == '+' || text[j] == '-' || text[j] == '.'))
            ++j;
        if (j + 2 < n && text[j] == ':' && text[j + 1] == '/' && text[j + 2] == '/') {
            std::size_t k = j + 3;
            while (k < n && is_bare_url_char(text[k])) ++k;
            // drop trailing punctuation
            while (k > j + 3) {
                const char last = text[k - 1];
                if (last == '.' || last == ',' || last == ';' || last == ':' || last == '!' ||
                    last == '?' || last == ')' || last == '\'' || last == '"')
                    --k;
                else
                    break;
            }
            const std::string_view candidate = text.substr(i, k - i);
            if (k > j + 3 && is_web_url(candidate)) {
                urls.emplace_back(candidate);
                i = k;
                continue;
            }
        }
        i = j;
    }
}

} // namespace

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool space_pending = false;
    bool newline_pending = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            c = '\n';
        }
        if (is_blank(c)) {
            if (!newline_pending) space_pending = true;
        } else if (c == '\n') {
            newline_pending = true;
            space_pending = false;
        } else {
            if (!out.empty()) {
                if (newline_pending)
                    out += '\n';
                else if (space_pending)
                    out += ' ';
            }
            newline_pending = space_pending = false;
            out += c;
        }
    }
    return out;
}

bool contains_html_tag(std::string_view text) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] == '<') {
            const char c = text[i + 1];
            if (is_alpha(c) || c == '/' || c == '!') return true;
        }
    }
    return false;
}

PreprocessedBody preprocess_body(std::string_view markup) {
    std::vector<Segment> segments;
    bool in_anchor = false;
    Segment anchor; // populated while in_anchor

    auto text_sink = [&]() -> std::string& {
        if (in_anchor) return anchor.text;
        if (segments.empty() || segments.back().is_anchor) segments.emplace_back();
        return segments.back().text;
    };
    auto flush_anchor = [&]() {
        if (!in_anchor) return;
        segments.push_back(std::move(anchor));
        anchor = Segment{};
        in_anchor = false;
    };

    std::size_t i = 0;
    const std::size_t n = markup.size();
    while (i < n) {
        const char c = markup[i];
        if (c == '<') {
            const auto tag = parse_tag(markup, i);
            if (!tag) {
                text_sink() += c;
                ++i;
                continue;
            }
            i = tag->end;
            if (tag->name == "!") continue;
            if (!tag->closing && (tag->name == "script" || tag->name == "style")) {
                // drop element content
                const std::string close = "</" + tag->name;
                std::size_t depth_end = i;
                while (depth_end < n) {
                    if ((markup[depth_end] == '<') && starts_with_ci(markup.substr(depth_end), close)) break;
                    ++depth_end;
                }
                if (depth_end < n) {
                    const std::size_t gt = markup.find('>', depth_end);
                    i = gt == std::string_view::npos ? n : gt + 1;
                } else {
                    i = n;
                }
                continue;
            }
            if (tag->name == "a") {
                if (tag->closing) {
                    flush_anchor();
                    continue;
                }
                flush_anchor(); // implicit close of a dangling anchor
                in_anchor = true;
                anchor.is_anchor = true;
                anchor.kind = AnchorKind::plain;
                for (const auto& [key, value] : tag->attrs) {
                    if (key != "href") continue;
                    const std::string href = decode_entities(value, /*in_text=*/false);
                    if (starts_with_ci(href, "mailto:")) {
                        anchor.kind = AnchorKind::email;
                    } else if (starts_with_ci(href, "tel:")) {
                        anchor.kind = AnchorKind::phone;
                    } else if (is_web_url(href)) {
                        anchor.kind = AnchorKind::web;
                        anchor.href = href;
                    }
                    break;
                }
                continue;
            }
            if (block_tags().count(tag->name)) {
                text_sink() += '\n';
            } else if (tag->name == "td" || tag->name == "th") {
                text_sink() += ' ';
            }
            continue;
        }
        if (c == '&') {
            std::string& sink = text_sink();
            const std::size_t used = decode_entity(markup, i, /*in_text=*/true, sink);
            if (used > 0) {
                i += used;
                continue;
            }
        }
        text_sink() += c;
        ++i;
    }
    flush_anchor();

    PreprocessedBody result;
    std::string assembled;
    for (const Segment& seg : segments) {
        if (!seg.is_anchor) {
            scan_bare_urls(seg.text, result.urls);
            assembled += seg.text;
            continue;
        }
        const std::string visible = collapse_whitespace(seg.text);
        switch (seg.kind) {
        case AnchorKind::web:
            result.urls.push_back(seg.href);
            assembled += "[URL]" + visible + "[/URL]";
            break;
        case AnchorKind::email:
            assembled += "[EMAIL]" + visible + "[/EMAIL]";
            break;
        case AnchorKind::phone:
            assembled += "[PHONE]" + visible + "[/PHONE]";
            break;
        case AnchorKind::plain:
            assembled += seg.text;
            break;
        }
    }
    result.body = collapse_whitespace(assembled);
    return result;
}

} // namespace apollo
