#include <algorithm>
#include <array>
#include <string_view>

#include "irbl/textprep.hpp"

namespace irbl {
namespace {

// Frozen English stop-word list (the classic 33-word analyzer list). Keep sorted.
constexpr std::array kStopWords = std::to_array<std::string_view>({
    "a",    "an",   "and",   "are",  "as",    "at",    "be",   "but",  "by",
    "for",  "if",   "in",    "into", "is",    "it",    "no",   "not",  "of",
    "on",   "or",   "such",  "that", "the",   "their", "then", "there", "these",
    "they", "this", "to",    "was",  "will",  "with",
});

static_assert(kStopWords.size() == 33);
static_assert(std::is_sorted(kStopWords.begin(), kStopWords.end()));

}  // namespace

bool is_stop_word(std::string_view lower_token) {
  return std::binary_search(kStopWords.begin(), kStopWords.end(), lower_token);
}

}  // namespace irbl
