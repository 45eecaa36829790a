#include "pulse/preprocess.hpp"

#include "pulse/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cctype>
#include <cstdint>

namespace pulse {

namespace {

struct Decoded {
    UChar32 code_point;  // negative for an ill-formed sequence
    std::size_t begin;
    std::size_t end;
};

// Decodes the code point starting at `offset`; ill-formed bytes advance by
// at least one byte and report a negative code point.
Decoded decode_at(std::string_view text, std::size_t offset) {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    auto i = static_cast<std::int32_t>(offset);
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    return {c, offset, static_cast<std::size_t>(i)};
}

bool is_whitespace(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

bool is_mark(UChar32 c) { return c >= 0 && (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

bool is_letter_or_digit(UChar32 c) {
    if (c < 0) return false;
    if (c < 0x80) return std::isalnum(c) != 0;
    return u_isalpha(c) || u_isdigit(c);
}

bool starts_with_icase(std::string_view text, std::size_t at, std::string_view prefix) {
    if (text.size() - at < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        const auto a = static_cast<unsigned char>(text[at + i]);
        if (std::tolower(a) != static_cast<unsigned char>(prefix[i])) return false;
    }
    return true;
}

bool url_starts_at(std::string_view text, std::size_t at) {
    return starts_with_icase(text, at, "http://") || starts_with_icase(text, at, "https://") ||
           starts_with_icase(text, at, "www.");
}

void append_utf8(std::string& out, UChar32 c) {
    char buffer[U8_MAX_LENGTH];
    std::int32_t length = 0;
    U8_APPEND_UNSAFE(buffer, length, c);
    out.append(buffer, static_cast<std::size_t>(length));
}

}  // namespace

std::string strip_urls(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (url_starts_at(text, i)) {
            while (i < text.size()) {
                const Decoded d = decode_at(text, i);
                if (is_whitespace(d.code_point)) break;
                i = d.end;
            }
            out.push_back(' ');
            continue;
        }
        const Decoded d = decode_at(text, i);
        out.append(text.substr(d.begin, d.end - d.begin));
        i = d.end;
    }
    return out;
}

std::string clean_special(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool extends_word = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const Decoded d = decode_at(text, i);
        i = d.end;
        const UChar32 c = d.code_point;
        if (c >= 0 && c < 0x80 && kSpecialCharacters.find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back(' ');
            extends_word = false;
        } else if (is_letter_or_digit(c) || is_whitespace(c)) {
            append_utf8(out, c);
            extends_word = !is_whitespace(c);
        } else if (is_mark(c) && extends_word) {
            append_utf8(out, c);
        } else {
            out.push_back(' ');
            extends_word = false;
        }
    }
    return out;
}

std::string nfc_normalize(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::IoError, std::string("ICU NFC unavailable: ") + u_errorName(status));
    }
    const auto source = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
    const icu::UnicodeString normalized = nfc->normalize(source, status);
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::IoError, std::string("NFC normalization failed: ") + u_errorName(status));
    }
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const Decoded d = decode_at(text, i);
        i = d.end;
        if (is_whitespace(d.code_point)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.append(text.substr(d.begin, d.end - d.begin));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::size_t scalar_length(std::string_view text) noexcept {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        i = decode_at(text, i).end;
        ++count;
    }
    return count;
}

std::vector<std::string> drop_short(std::vector<std::string> tokens) {
    std::erase_if(tokens, [](const std::string& token) { return scalar_length(token) <= 2; });
    return tokens;
}

CleanText preprocess(std::string_view raw_text) {
    const std::string normalized = nfc_normalize(clean_special(strip_urls(raw_text)));
    CleanText result;
    result.tokens = drop_short(tokenize(normalized));
    if (result.tokens.empty()) {
        throw Error(ErrorCode::EmptyAfterCleaning, "no tokens left after cleaning");
    }
    for (const auto& token : result.tokens) {
        if (!result.text.empty()) result.text.push_back(' ');
        result.text += token;
    }
    return result;
}

}  // namespace pulse
