#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pulse {

/// Every ASCII character that clean_special replaces with a space.
inline constexpr std::string_view kSpecialCharacters = R"(!"#$%&'()*+,-./:;<=>?@[\]^_`{|}~)";

struct CleanText {
    std::string text;  // tokens joined by single spaces
    std::vector<std::string> tokens;

    bool operator==(const CleanText&) const = default;
};

/// Replaces each run starting at "http://", "https://" or "www." (ASCII
/// case-insensitive) up to the next whitespace with a single space.
std::string strip_urls(std::string_view text);

/// Letters, digits and whitespace survive; everything else becomes a space.
/// Combining marks survive only when they extend a surviving letter or digit,
/// so decomposed accents are kept for NFC to compose.
std::string clean_special(std::string_view text);

std::string nfc_normalize(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

/// Drops tokens of two or fewer Unicode scalar values.
std::vector<std::string> drop_short(std::vector<std::string> tokens);

std::size_t scalar_length(std::string_view text) noexcept;

/// strip_urls, clean_special, NFC, tokenize, drop_short. Throws
/// Error(EmptyAfterCleaning) when no token survives.
CleanText preprocess(std::string_view raw_text);

}  // namespace pulse
