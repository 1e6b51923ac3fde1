// Internal UTF-8 helpers shared by the text-processing modules.
#ifndef REVDIFF_SRC_TEXT_UTIL_H_
#define REVDIFF_SRC_TEXT_UTIL_H_

#include <string>
#include <string_view>

namespace revdiff::text {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t c);

bool is_space(char32_t c);
bool is_punct(char32_t c);
bool is_upper(char32_t c);
bool is_control(char32_t c);

// Full Unicode lowercase mapping with root-locale rules.
std::string to_lower(std::string_view s);

// Removes leading and trailing punctuation code points.
std::u32string_view strip_punct(std::u32string_view s);

}  // namespace revdiff::text

#endif  // REVDIFF_SRC_TEXT_UTIL_H_
