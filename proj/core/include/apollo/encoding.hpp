#pragma once

// Byte-level codecs used by the mail parser and the reputation client:
// base64 (standard + URL-safe), quoted-printable, RFC 2047 encoded words,
// and legacy charset to UTF-8 conversion.

#include <string>
#include <string_view>

namespace apollo {

std::string base64_encode(std::string_view bytes);
// URL-safe alphabet, trailing '=' padding stripped.
std::string base64url_encode_nopad(std::string_view bytes);
// Accepts both alphabets, ignores whitespace, tolerates missing padding.
// Returns false on non-alphabet input.
bool base64_decode(std::string_view text, std::string& out);

// RFC 2045 quoted-printable. `underscore_is_space` enables the RFC 2047
// "Q" variant used in encoded header words.
std::string quoted_printable_decode(std::string_view text, bool underscore_is_space = false);

// Validates UTF-8, replacing every invalid byte with U+FFFD.
std::string utf8_sanitize(std::string_view bytes);

// Converts `bytes` in the named charset to UTF-8. Supports the charsets that
// actually occur in mail corpora (utf-8, us-ascii, iso-8859-1/15,
// windows-1252); anything else falls back to UTF-8 validation with
// replacement characters.
std::string charset_to_utf8(std::string_view bytes, std::string_view charset);

// Decodes RFC 2047 encoded words ("=?charset?B|Q?payload?=") in a header
// value; whitespace between adjacent encoded words is dropped.
std::string rfc2047_decode(std::string_view value);

} // namespace apollo
