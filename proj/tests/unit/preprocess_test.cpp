#include "pulse/preprocess.hpp"

#include "pulse/error.hpp"
#include "pulse/random.hpp"
#include "support.hpp"

#include <doctest.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <regex>
#include <string>
#include <vector>

using namespace pulse;

namespace {

using Tokens = std::vector<std::string>;

// Straightforward ASCII-only restatement of the pipeline, used as an oracle.
Tokens ascii_oracle(const std::string& raw) {
    static const std::regex url(R"((https?://|www\.)[^ \t\n\v\f\r]*)", std::regex::icase);
    std::string text = std::regex_replace(raw, url, " ");
    for (char& c : text) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == ' ' || c == '\t' ||
                          c == '\n' || c == '\v' || c == '\f' || c == '\r';
        if (!keep) c = ' ';
    }
    Tokens tokens;
    std::string current;
    for (char c : text + " ") {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (current.size() > 2) tokens.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    return tokens;
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

bool only_word_characters(const std::string& token) {
    std::int32_t i = 0;
    const auto length = static_cast<std::int32_t>(token.size());
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(token.data());
    bool first = true;
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) return false;
        const bool word = u_isalpha(c) || u_isdigit(c);
        const bool mark = (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
        if (!(word || (mark && !first))) return false;
        first = false;
    }
    return true;
}

std::string ascii_fuzz_case(SeededRng& rng) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 \t\n"
        "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
    static const std::vector<std::string> urls = {"http://", "https://", "www.", "HTTP://", "Www."};
    std::string text;
    const auto length = rng.below(60);
    for (std::uint64_t i = 0; i < length; ++i) {
        if (rng.below(25) == 0) {
            text += urls[rng.below(urls.size())];
        } else {
            text.push_back(alphabet[rng.below(alphabet.size())]);
        }
    }
    return text;
}

}  // namespace

TEST_CASE("strip_urls") {
    CHECK(strip_urls("see https://t.co/xyz now") == "see   now");
    CHECK(strip_urls("") == "");
    CHECK(strip_urls("no links here") == "no links here");
    CHECK(strip_urls("WWW.Example.com/x end") == "  end");
    CHECK(strip_urls("a http://x\xC2\xA0" "b") == "a  \xC2\xA0" "b");
}

TEST_CASE("clean_special") {
    CHECK(clean_special("BTC!!! to the #moon") == "BTC    to the  moon");
    CHECK(clean_special("abc123") == "abc123");
    CHECK(clean_special("@user $ADA") == " user  ADA");
    CHECK(clean_special("to the \xF0\x9F\x9A\x80") == "to the  ");
    CHECK(clean_special("cafe\xCC\x81") == "cafe\xCC\x81");
    CHECK(clean_special(" \xCC\x81x") == "  x");
    for (char c : kSpecialCharacters) CHECK(clean_special(std::string(1, c)) == " ");
}

TEST_CASE("tokenize and drop_short") {
    CHECK(tokenize("the  quick  fox") == Tokens{"the", "quick", "fox"});
    CHECK(tokenize("   ").empty());
    CHECK(tokenize("a b  c") == Tokens{"a", "b", "c"});
    CHECK(tokenize("one\xC2\xA0two\tthree\n") == Tokens{"one", "two", "three"});
    CHECK(drop_short({"BTC", "up", "to", "the", "moon"}) == Tokens{"BTC", "the", "moon"});
    CHECK(drop_short({}).empty());
    CHECK(drop_short({"abc"}) == Tokens{"abc"});
    CHECK(drop_short({"\xC3\xA9t\xC3\xA9", "\xC3\xA9t"}) == Tokens{"\xC3\xA9t\xC3\xA9"});
}

TEST_CASE("preprocess examples") {
    CHECK(preprocess("Check https://t.co/abc BTC up!!").tokens == Tokens{"Check", "BTC"});
    CHECK(preprocess("Blockchain technology is revolutionizing various industries worldwide.").tokens ==
          Tokens{"Blockchain", "technology", "revolutionizing", "various", "industries", "worldwide"});
    CHECK(preprocess("Check https://t.co/abc BTC up!!").text == "Check BTC");
    try {
        preprocess("ok");
        FAIL("expected EmptyAfterCleaning");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyAfterCleaning);
    }
    CHECK_THROWS_AS(preprocess(""), Error);
    CHECK_THROWS_AS(preprocess("\xF0\x9F\x9A\x80\xF0\x9F\x9A\x80"), Error);
}

TEST_CASE("preprocess composes decomposed accents") {
    CHECK(preprocess("cafe\xCC\x81 time").tokens == Tokens{"caf\xC3\xA9", "time"});
    CHECK(preprocess("cafe\xCC\x81 time") == preprocess("caf\xC3\xA9 time"));
    // two scalars after composition, so dropped
    CHECK(preprocess("e\xCC\x81t coin").tokens == Tokens{"coin"});
}

TEST_CASE("preprocess matches the ASCII oracle") {
    SeededRng rng(derive_seed(7, "ascii-oracle"));
    for (int i = 0; i < 1000; ++i) {
        const auto raw = ascii_fuzz_case(rng);
        const auto expected = ascii_oracle(raw);
        if (expected.empty()) {
            CHECK_THROWS_AS(preprocess(raw), Error);
        } else {
            CHECK_MESSAGE(preprocess(raw).tokens == expected, raw);
        }
    }
}

TEST_CASE("preprocess properties over a seeded fuzz corpus") {
    SeededRng rng(derive_seed(42, "preprocess-fuzz"));
    using pulse::testing::fuzz_comment;
    int nonempty = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto raw = fuzz_comment(rng);
        CleanText once;
        try {
            once = preprocess(raw);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyAfterCleaning);
            continue;
        }
        ++nonempty;
        CHECK(preprocess(raw) == once);
        CHECK_MESSAGE(preprocess(once.text) == once, raw);

        std::string joined;
        for (const auto& token : once.tokens) {
            CHECK(scalar_length(token) > 2);
            CHECK_MESSAGE(only_word_characters(token), token);
            if (!joined.empty()) joined += ' ';
            joined += token;
        }
        CHECK(joined == once.text);
        const auto folded = lower(once.text);
        CHECK(folded.find("http://") == std::string::npos);
        CHECK(folded.find("https://") == std::string::npos);
        CHECK(folded.find("www.") == std::string::npos);
    }
    CHECK(nonempty > 500);
}
