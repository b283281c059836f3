#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace apollo {

struct PreprocessedBody {
    std::string body;
    std::vector<std::string> urls;
};

// Strips markup from an HTML or plain-text body:
//   - anchors become meta-tagged text: [URL]visible[/URL] for web links,
//     [EMAIL]...[/EMAIL] for mailto:, [PHONE]...[/PHONE] for tel:;
//   - web anchor hrefs and bare scheme://authority URLs in plain text are
//     collected into `urls` in order of first appearance (mailto/tel are not);
//   - all other tags are dropped, character entities decoded;
//   - runs of blanks collapse to one space, runs of newlines to one newline.
// Parsing is tolerant: invalid markup degrades to tag stripping, and the
// output is a fixpoint (meta-tags are not re-interpreted as tags).
PreprocessedBody preprocess_body(std::string_view markup);

// The blank/newline collapse pass by itself.
std::string collapse_whitespace(std::string_view text);

// True if `text` still contains something shaped like an HTML tag.
bool contains_html_tag(std::string_view text);

} // namespace apollo
