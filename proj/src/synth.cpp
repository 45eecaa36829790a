#include "pulse/synth.hpp"

#include "pulse/error.hpp"
#include "pulse/preprocess.hpp"
#include "pulse/random.hpp"

#include <cstdio>
#include <span>
#include <string>
#include <unordered_set>

namespace pulse {

namespace {

struct CoinNames {
    std::string_view display;
    std::string_view ticker;
};

constexpr std::array<CoinNames, 5> kCoinNames{{{"Cardano", "$ADA"},
                                               {"Binance", "$BNB"},
                                               {"Matic", "$MATIC"},
                                               {"Fantom", "$FTM"},
                                               {"Ripple", "$XRP"}}};

// Slots: {coin} {tick} {time} {past} {amount} {pct}. Every template names
// the coin so cleaned texts never coincide across coins.
constexpr std::array<std::string_view, 32> kTemplates{
    // incremental
    "{coin} will double {time}",
    "I expect {tick} to increase {pct} {time}",
    "Analysts anticipate growth for {coin} {time}",
    "{coin} is going to reach a new high of {amount} {time}",
    "{tick} is expected to pump past {amount} {time}",
    // decremental
    "{coin} will drop below {amount} {time}",
    "I expect {tick} to decline {pct} {time}",
    "{coin} is projected to fall under {amount} {time}",
    "{tick} is going to dump to {amount} {time}",
    // neutral
    "{coin} will stay flat around {amount} {time}",
    "I expect {tick} to trade sideways near {amount} {time}",
    "There is uncertainty regarding the future of {coin} at {amount}",
    // non-predictive
    "{coin} reported record volume of {amount} million {past}",
    "Just moved {amount} {tick} to a hardware wallet",
    "{coin} technology is revolutionizing payments in {amount} shops worldwide",
    "The {coin} community call covered {amount} new proposals {past}",
    // hope
    "Putting {amount} into {tick}, guaranteed millionaire {time}",
    "{tick} will 100x overnight from {amount}, easy",
    "With the recent trends it is likely {coin} reaches {amount} {time}",
    "{coin} will probably recover to {amount} {time}",
    "Excited about the future of {coin}! {amount} builders and counting",
    "Feeling hopeful about {coin} adoption at {amount} merchants",
    "So optimistic about {tick} {time}",
    "I doubt {coin} will ever increase in value from {amount}",
    // regret
    "I regret buying {tick} at {amount}, it lost so much value",
    "Regret selling my {coin} bags at {amount} {past}",
    "I really regret that I invested {amount} in {coin}",
    "I should have bought {tick} at {amount}, now it is too late",
    "Missed the {coin} rally from {amount} again",
    "I'm glad I didn't invest in {coin} at {amount}, it's crashing",
    "Holding {amount} {tick} since {past} and sleeping fine",
    "Staking rewards on {coin} paid out {amount} today",
};

constexpr std::array<std::string_view, 10> kFuturePhrases{
    "by the end of the year", "next quarter",     "before the next halving", "this summer",
    "by December",            "within six months", "next week",              "after the upgrade",
    "by spring",              "this cycle"};

constexpr std::array<std::string_view, 6> kPastPhrases{
    "last quarter", "yesterday", "this morning", "last month", "during the bear market",
    "back in 2021"};

constexpr std::array<std::string_view, 6> kOpeners{"", "", "Honestly, ", "IMO ", "Quick take: ",
                                                   "Not financial advice, but "};

constexpr std::array<std::string_view, 8> kTails{"",           "",          " #crypto",
                                                 " #altcoins", " @cryptodad", " \xF0\x9F\x9A\x80",
                                                 " https://t.co/", " www.coinfeed.example/"};

constexpr std::array<std::string_view, 8> kReactions{
    "ok", "gm!", "\xF0\x9F\x9A\x80\xF0\x9F\x9A\x80\xF0\x9F\x9A\x80", "\xF0\x9F\x91\x80",
    "no.", "up!!", "ok ok", "\xF0\x9F\x98\x82\xF0\x9F\x98\x82"};

template <typename T, std::size_t N>
std::string_view pick(SeededRng& rng, const std::array<T, N>& options) {
    return options[rng.below(N)];
}

void replace_all(std::string& text, std::string_view slot, std::string_view value) {
    for (auto pos = text.find(slot); pos != std::string::npos;
         pos = text.find(slot, pos + value.size())) {
        text.replace(pos, slot.size(), value);
    }
}

std::string fill(SeededRng& rng, const CoinNames& names) {
    std::string text(pick(rng, kOpeners));
    text += pick(rng, kTemplates);
    replace_all(text, "{coin}", names.display);
    replace_all(text, "{tick}", names.ticker);
    replace_all(text, "{time}", pick(rng, kFuturePhrases));
    replace_all(text, "{past}", pick(rng, kPastPhrases));
    replace_all(text, "{amount}", "$" + std::to_string(100 + rng.below(99'900)));
    replace_all(text, "{pct}", std::to_string(5 + rng.below(91)) + "%");

    std::string tail(pick(rng, kTails));
    if (tail.ends_with('/')) {
        char hex[16];
        std::snprintf(hex, sizeof hex, "%08llx", static_cast<unsigned long long>(rng.next() >> 32));
        tail += hex;
    }
    return text + tail;
}

std::string timestamp_in_study_window(SeededRng& rng) {
    constexpr std::int64_t kStart = 1630454400;  // 2021-09-01T00:00:00Z
    constexpr std::int64_t kEnd = 1680307199;    // 2023-03-31T23:59:59Z
    return format_utc(kStart + static_cast<std::int64_t>(rng.below(kEnd - kStart + 1)));
}

}  // namespace

std::vector<Comment> synthesize_corpus(std::size_t per_coin_n, std::uint64_t seed) {
    if (per_coin_n == 0) throw Error(ErrorCode::UsageError, "per-coin count must be at least 1");

    std::vector<Comment> corpus;
    corpus.reserve(per_coin_n * kStudyCoins.size());
    std::unordered_set<std::string> seen_clean;

    for (std::size_t c = 0; c < kStudyCoins.size(); ++c) {
        const std::string_view coin = kStudyCoins[c];
        SeededRng rng(derive_seed(seed, "synth/" + std::string(coin)));
        for (std::size_t i = 0; i < per_coin_n; ++i) {
            Comment comment;
            char id[64];
            std::snprintf(id, sizeof id, "%.*s-%06zu", static_cast<int>(coin.size()), coin.data(), i + 1);
            comment.id = id;
            comment.coin = std::string(coin);
            comment.created_at = timestamp_in_study_window(rng);

            if (rng.below(100) == 0) {
                comment.raw_text = std::string(pick(rng, kReactions));
            } else {
                for (int attempt = 0;; ++attempt) {
                    if (attempt == 100'000) {
                        throw Error(ErrorCode::UsageError, "synthetic templates exhausted for " +
                                                               std::string(coin));
                    }
                    std::string text = fill(rng, kCoinNames[c]);
                    if (seen_clean.insert(preprocess(text).text).second) {
                        comment.raw_text = std::move(text);
                        break;
                    }
                }
            }
            corpus.push_back(std::move(comment));
        }
    }
    return corpus;
}

}  // namespace pulse
