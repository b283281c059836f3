#include "apollo/encoding.hpp"

#include <array>
#include <cstdint>

namespace apollo {

namespace {

constexpr char kStdAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr char kUrlAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

std::string base64_encode_with(std::string_view bytes, const char* alphabet, bool pad) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8) | uint8_t(bytes[i + 2]);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += alphabet[v & 63];
        i += 3;
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        uint32_t v = uint8_t(bytes[i]) << 16;
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        if (pad) out += "==";
    } else if (rest == 2) {
        uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        if (pad) out += '=';
    }
    return out;
}

int decode_digit(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+' || c == '-') return 62;
    if (c == '/' || c == '_') return 63;
    return -1;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
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

constexpr std::string_view kReplacement = "\xEF\xBF\xBD"; // U+FFFD

// windows-1252 codepoints for bytes 0x80..0x9F (0 means undefined -> U+FFFD).
constexpr std::array<uint16_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178,
};

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

} // namespace

std::string base64_encode(std::string_view bytes) {
    return base64_encode_with(bytes, kStdAlphabet, true);
}

std::string base64url_encode_nopad(std::string_view bytes) {
    return base64_encode_with(bytes, kUrlAlphabet, false);
}

bool base64_decode(std::string_view text, std::string& out) {
    out.clear();
    uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\r' || c == '\n' || c == ' ' || c == '\t') continue;
        const int d = decode_digit(c);
        if (d < 0) return false;
        acc = (acc << 6) | uint32_t(d);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out += char((acc >> bits) & 0xFF);
        }
    }
    return true;
}

std::string quoted_printable_decode(std::string_view text, bool underscore_is_space) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '=' && i + 1 < text.size()) {
            // soft line break
            if (text[i + 1] == '\n') {
                i += 1;
                continue;
            }
            if (text[i + 1] == '\r') {
                i += (i + 2 < text.size() && text[i + 2] == '\n') ? 2 : 1;
                continue;
            }
            if (i + 2 < text.size()) {
                const int hi = hex_digit(text[i + 1]);
                const int lo = hex_digit(text[i + 2]);
                if (hi >= 0 && lo >= 0) {
                    out += char((hi << 4) | lo);
                    i += 2;
                    continue;
                }
            }
            out += c;
        } else if (underscore_is_space && c == '_') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

std::string utf8_sanitize(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const uint8_t b = uint8_t(bytes[i]);
        if (b < 0x80) {
            out += char(b);
            ++i;
            continue;
        }
        int len = 0;
        uint32_t cp = 0;
        if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp = b & 0x1F;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp = b & 0x0F;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp = b & 0x07;
        } else {
            out += kReplacement;
            ++i;
            continue;
        }
        bool ok = i + std::size_t(len) <= n;
        for (int k = 1; ok && k < len; ++k) {
            const uint8_t cont = uint8_t(bytes[i + std::size_t(k)]);
            if ((cont & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (cont & 0x3F);
            }
        }
        if (ok) {
            // reject overlongs, surrogates, out of range
            if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
                (cp >= 0xD800 && cp <= 0xDFFF)) {
                ok = false;
            }
        }
        if (ok) {
            out.append(bytes.substr(i, std::size_t(len)));
            i += std::size_t(len);
        } else {
            out += kReplacement;
            ++i;
        }
    }
    return out;
}

std::string charset_to_utf8(std::string_view bytes, std::string_view charset) {
    std::string cs = ascii_lower(charset);
    if (!cs.empty() && cs.front() == '"' && cs.back() == '"' && cs.size() >= 2)
        cs = cs.substr(1, cs.size() - 2);

    if (cs == "iso-8859-1" || cs == "iso8859-1" || cs == "latin1" || cs == "latin-1" ||
        cs == "cp819" || cs == "iso-8859-15" || cs == "windows-1252" || cs == "cp1252") {
        const bool cp1252 = (cs == "windows-1252" || cs == "cp1252");
        const bool latin9 = (cs == "iso-8859-15");
        std::string out;
        out.reserve(bytes.size() * 2);
        for (char raw : bytes) {
            const uint8_t b = uint8_t(raw);
            if (b < 0x80) {
                out += char(b);
            } else if (b < 0xA0 && cp1252) {
                const uint16_t cp = kCp1252High[b - 0x80];
                if (cp == 0)
                    out += kReplacement;
                else
                    append_codepoint(out, cp);
            } else if (latin9 && b == 0xA4) {
                append_codepoint(out, 0x20AC); // euro sign
            } else {
                append_codepoint(out, b);
            }
        }
        return out;
    }
    // utf-8, us-ascii and anything unrecognized: validate as UTF-8.
    return utf8_sanitize(bytes);
}

std::string rfc2047_decode(std::string_view value) {
    std::string out;
    std::size_t i = 0;
    const std::size_t n = value.size();
    bool last_was_encoded = false;
    std::size_t pending_ws_begin = std::string::npos;

    while (i < n) {
        if (value[i] == '=' && i + 1 < n && value[i + 1] == '?') {
            // =?charset?enc?payload?=
            const std::size_t cs_end = value.find('?', i + 2);
            if (cs_end != std::string_view::npos && cs_end + 2 < n && value[cs_end + 2] == '?') {
                const char enc = value[cs_end + 1];
                const std::size_t payload_begin = cs_end + 3;
                const std::size_t payload_end = value.find("?=", payload_begin);
                if (payload_end != std::string_view::npos && (enc == 'B' || enc == 'b' || enc == 'Q' || enc == 'q')) {
                    const std::string_view charset = value.substr(i + 2, cs_end - (i + 2));
                    const std::string_view payload = value.substr(payload_begin, payload_end - payload_begin);
                    std::string decoded_bytes;
                    bool ok;
                    if (enc == 'B' || enc == 'b') {
                        ok = base64_decode(payload, decoded_bytes);
                    } else {
                        decoded_bytes = quoted_printable_decode(payload, true);
                        ok = true;
                    }
                    if (ok) {
                        // whitespace between two encoded words is not emitted
                        if (last_was_encoded && pending_ws_begin != std::string::npos)
                            out.erase(pending_ws_begin);
                        out += charset_to_utf8(decoded_bytes, charset);
                        i = payload_end + 2;
                        last_was_encoded = true;
                        pending_ws_begin = std::string::npos;
                        continue;
                    }
                }
            }
        }
        const char c = value[i];
        if (c == ' ' || c == '\t') {
            if (pending_ws_begin == std::string::npos) pending_ws_begin = out.size();
        } else {
            last_was_encoded = false;
            pending_ws_begin = std::string::npos;
        }
        out += c;
        ++i;
    }
    return utf8_sanitize(out);
}

} // namespace apollo
