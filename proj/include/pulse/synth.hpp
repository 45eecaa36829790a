#pragma once

#include "pulse/records.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace pulse {

/// The five coins of the original study, in table order.
inline constexpr std::array<std::string_view, 5> kStudyCoins{"cardano", "binance", "matic",
                                                             "fantom", "ripple"};

/// Deterministic synthetic corpus: `per_coin_n` comments for each study coin,
/// built from template sentences covering all eleven labels. Cleaned texts
/// are unique across the whole corpus, apart from a small share of
/// reaction-only comments that clean to nothing.
std::vector<Comment> synthesize_corpus(std::size_t per_coin_n, std::uint64_t seed);

}  // namespace pulse
