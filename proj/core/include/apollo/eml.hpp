#pragma once

#include <string_view>

#include "apollo/email.hpp"

namespace apollo {

// Parses an RFC 822/MIME message into the normalized pipeline form.
//
// Multipart messages are walked depth first; a text/html part is preferred
// over text/plain because it carries the anchors the meta-tagging step
// needs. Header values are RFC 2047 decoded, bodies are decoded per their
// Content-Transfer-Encoding and declared charset. A missing or empty
// Subject becomes "NO SUBJECT".
//
// Throws MalformedMessage if the input is not recognizably a message and
// EmptyBody if no textual part is found.
PreprocessedEmail parse_eml(std::string_view raw);

} // namespace apollo
