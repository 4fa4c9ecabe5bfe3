#pragma once

// WordPiece vocabulary induction and greedy encoding. Training repeatedly
// merges the adjacent symbol pair maximizing
//     freq(pair) / (freq(left) * freq(right)),
// ties broken lexicographically by (left, right), until the target size is
// reached or no pair is frequent enough. Continuation pieces carry the `##`
// prefix.

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace currikit {

struct Vocabulary {
    // Layout: the five specials, then every observed character (raw and
    // ##-prefixed, sorted), then merged pieces in merge order.
    std::vector<std::string> tokens;
    std::unordered_map<std::string, std::int32_t> token_ids;
    std::size_t target_size = 0;
    bool lowercase = true;

    static constexpr std::int32_t kPad = 0;
    static constexpr std::int32_t kUnk = 1;
    static constexpr std::int32_t kCls = 2;
    static constexpr std::int32_t kSep = 3;
    static constexpr std::int32_t kMask = 4;

    std::int32_t id_of(const std::string& token) const {
        auto it = token_ids.find(token);
        return it == token_ids.end() ? -1 : it->second;
    }
};

struct Encoding {
    std::vector<std::int32_t> ids;
    std::vector<std::string> tokens;
    bool truncated = false;
};

// Word frequency accumulator fed by one or more text sources.
using WordCounts = std::unordered_map<std::string, std::int64_t>;

void count_words(std::string_view text, bool lowercase, WordCounts& counts);

Vocabulary train_wordpiece(const WordCounts& counts, std::size_t target_size,
                           std::int64_t min_pair_freq, bool lowercase = true);

Vocabulary train_wordpiece(const std::vector<std::string>& texts, std::size_t target_size,
                           std::int64_t min_pair_freq, bool lowercase = true);

// Greedy longest-match-first segmentation per word; a word that cannot be
// fully segmented becomes a single [UNK]. With wrap, output is
// [CLS] ... [SEP], truncated to max_len with [SEP] kept last.
Encoding encode(const Vocabulary& vocab, std::string_view text, std::size_t max_len = 50,
                bool wrap = true);

// vocab.txt convention: one token per line, line number = id.
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path, bool lowercase = true);

}  // namespace currikit
