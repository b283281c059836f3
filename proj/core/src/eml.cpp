#include "apollo/eml.hpp"

#include <optional>
#include <string>
#include <vector>

#include "apollo/body_text.hpp"
#include "apollo/encoding.hpp"
#include "apollo/errors.hpp"

namespace apollo {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return s.substr(b, e - b);
}

bool is_header_name_char(char c) {
    return c > 32 && c < 127 && c != ':';
}

struct RawHeaders {
    std::vector<std::pair<std::string, std::string>> entries; // undecoded values
    std::string_view body;                                    // bytes after the blank line
};

// Splits a message (or MIME part) into unfolded header lines and body bytes.
// `top_level` demands that the first line actually looks like a header.
RawHeaders split_headers(std::string_view raw, bool top_level) {
    RawHeaders out;
    std::size_t pos = 0;
    const std::size_t n = raw.size();
    bool first_line = true;
    std::string name;
    std::string value;

    auto commit = [&]() {
        if (!name.empty()) out.entries.emplace_back(name, std::string(trim(value)));
        name.clear();
        value.clear();
    };

    while (pos < n) {
        std::size_t eol = raw.find('\n', pos);
        std::size_t line_end = eol == std::string_view::npos ? n : eol;
        std::string_view line = raw.substr(pos, line_end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line.empty()) {
            // header/body boundary
            commit();
            out.body = eol == std::string_view::npos ? std::string_view{} : raw.substr(eol + 1);
            return out;
        }
        if (first_line && line.size() > 5 && line.substr(0, 5) == "From " && top_level) {
            // mbox separator line, skip
            first_line = false;
            pos = eol == std::string_view::npos ? n : eol + 1;
            continue;
        }
        if (line[0] == ' ' || line[0] == '\t') {
            // folded continuation
            if (name.empty()) {
                if (top_level) throw MalformedMessage("continuation line before any header");
            } else {
                value += ' ';
                value += trim(line);
            }
        } else {
            const std::size_t colon = line.find(':');
            bool shaped = colon != std::string_view::npos && colon > 0;
            for (std::size_t i = 0; shaped && i < colon; ++i)
                shaped = is_header_name_char(line[i]);
            if (!shaped) {
                if (first_line && top_level)
                    throw MalformedMessage("first line is not a header field");
                // tolerated garbage between headers of a nested part; stop headers here
                commit();
                out.body = raw.substr(pos);
                return out;
            }
            commit();
            name = std::string(line.substr(0, colon));
            value = std::string(trim(line.substr(colon + 1)));
        }
        first_line = false;
        pos = eol == std::string_view::npos ? n : eol + 1;
    }
    commit();
    out.body = std::string_view{};
    return out;
}

std::optional<std::string_view> find_header(const RawHeaders& headers, std::string_view name) {
    for (const auto& [key, value] : headers.entries) {
        if (ascii_lower(key) == name) return value;
    }
    return std::nullopt;
}

struct ContentType {
    std::string type = "text";
    std::string subtype = "plain";
    std::string charset;
    std::string boundary;
};

ContentType parse_content_type(std::string_view value) {
    ContentType ct;
    std::size_t semi = value.find(';');
    std::string_view media = trim(value.substr(0, semi == std::string_view::npos ? value.size() : semi));
    const std::size_t slash = media.find('/');
    if (slash != std::string_view::npos) {
        ct.type = ascii_lower(trim(media.substr(0, slash)));
        ct.subtype = ascii_lower(trim(media.substr(slash + 1)));
    } else if (!media.empty()) {
        ct.type = ascii_lower(media);
        ct.subtype.clear();
    }
    // parameters
    while (semi != std::string_view::npos) {
        const std::size_t param_begin = semi + 1;
        semi = value.find(';', param_begin);
        std::string_view param =
            trim(value.substr(param_begin, (semi == std::string_view::npos ? value.size() : semi) - param_begin));
        const std::size_t eq = param.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string key = ascii_lower(trim(param.substr(0, eq)));
        std::string_view val = trim(param.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        if (key == "charset")
            ct.charset = std::string(val);
        else if (key == "boundary")
            ct.boundary = std::string(val);
    }
    return ct;
}

std::string decode_transfer_encoding(std::string_view body, std::string_view encoding) {
    const std::string enc = ascii_lower(trim(encoding));
    if (enc == "base64") {
        std::string out;
        if (base64_decode(body, out)) return out;
        return std::string(body); // not valid base64, pass through
    }
    if (enc == "quoted-printable") return quoted_printable_decode(body);
    return std::string(body);
}

struct TextPart {
    bool html = false;
    std::string text; // UTF-8
};

// Depth-first search for the body part: first text/html wins, else the
// first text/plain.
void collect_text_parts(const RawHeaders& part, int depth, std::optional<TextPart>& html,
                        std::optional<TextPart>& plain) {
    if (depth > 8) return; // nesting bomb guard
    ContentType ct;
    if (auto value = find_header(part, "content-type")) ct = parse_content_type(*value);

    if (ct.type == "multipart" && !ct.boundary.empty()) {
        const std::string open = "--" + ct.boundary;
        std::string_view body = part.body;
        std::vector<std::string_view> chunks;
        std::size_t pos = 0;
        std::size_t begin = std::string_view::npos;
        while (pos <= body.size()) {
            std::size_t line_start = pos;
            std::size_t eol = body.find('\n', pos);
            std::string_view line = body.substr(line_start, (eol == std::string_view::npos ? body.size() : eol) - line_start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            const bool is_delim = line.size() >= open.size() && line.substr(0, open.size()) == open;
            if (is_delim) {
                if (begin != std::string_view::npos && line_start > begin)
                    chunks.push_back(body.substr(begin, line_start - begin));
                const bool terminal = line.size() >= open.size() + 2 && line.substr(open.size(), 2) == "--";
                if (terminal) break;
                begin = eol == std::string_view::npos ? body.size() : eol + 1;
            }
            if (eol == std::string_view::npos) break;
            pos = eol + 1;
        }
        for (std::string_view chunk : chunks) {
            RawHeaders sub = split_headers(chunk, /*top_level=*/false);
            collect_text_parts(sub, depth + 1, html, plain);
            if (html) return;
        }
        return;
    }

    if (ct.type != "text") return;
    if (auto disp = find_header(part, "content-disposition")) {
        const std::string d = ascii_lower(*disp);
        if (d.rfind("attachment", 0) == 0) return;
    }

    std::string decoded = part.body.empty() ? std::string{} : decode_transfer_encoding(part.body, find_header(part, "content-transfer-encoding").value_or(""));
    std::string text = charset_to_utf8(decoded, ct.charset.empty() ? "utf-8" : ct.charset);

    if (ct.subtype == "html") {
        if (!html) html = TextPart{true, std::move(text)};
    } else {
        if (!plain) plain = TextPart{false, std::move(text)};
    }
}

} // namespace

PreprocessedEmail parse_eml(std::string_view raw) {
    if (raw.empty()) throw MalformedMessage("empty input");

    RawHeaders top = split_headers(raw, /*top_level=*/true);
    if (top.entries.empty()) throw MalformedMessage("no header fields found");

    PreprocessedEmail email;
    for (const auto& [name, value] : top.entries)
        email.headers.add(name, rfc2047_decode(value));

    const auto subject = email.headers.get("Subject");
    email.subject = (subject && !trim(*subject).empty()) ? std::string(trim(*subject)) : "NO SUBJECT";

    std::optional<TextPart> html, plain;
    collect_text_parts(top, 0, html, plain);
    const std::optional<TextPart>& chosen = html ? html : plain;
    if (!chosen || trim(chosen->text).empty()) throw EmptyBody("no textual part found");

    PreprocessedBody processed = preprocess_body(chosen->text);
    email.body = std::move(processed.body);
    email.urls = std::move(processed.urls);
    return email;
}

} // namespace apollo
