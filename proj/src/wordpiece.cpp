#include "currikit/wordpiece.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "currikit/corpus.hpp"
#include "currikit/error.hpp"

namespace currikit {

namespace {

const char* kSpecials[] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};

// Splits a UTF-8 string into code-point substrings.
std::vector<std::string> utf8_chars(std::string_view word) {
    std::vector<std::string> chars;
    std::size_t i = 0;
    while (i < word.size()) {
        std::size_t len = 1;
        const unsigned char b = static_cast<unsigned char>(word[i]);
        if ((b & 0xe0) == 0xc0)
            len = 2;
        else if ((b & 0xf0) == 0xe0)
            len = 3;
        else if ((b & 0xf8) == 0xf0)
            len = 4;
        len = std::min(len, word.size() - i);
        chars.emplace_back(word.substr(i, len));
        i += len;
    }
    return chars;
}

using SymbolId = std::uint32_t;

struct SymbolTable {
    std::vector<std::string> names;
    std::unordered_map<std::string, SymbolId> ids;

    SymbolId intern(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        const SymbolId id = static_cast<SymbolId>(names.size());
        names.push_back(name);
        ids.emplace(name, id);
        return id;
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<SymbolId, SymbolId>& p) const {
        return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(p.first) << 32) |
                                          p.second);
    }
};

struct TrainWord {
    std::vector<SymbolId> symbols;
    std::int64_t freq = 0;
};

// Exact score comparison: c1/(l1*r1) vs c2/(l2*r2) via cross multiplication
// in 128-bit arithmetic, so induction never depends on float rounding.
bool score_less(std::int64_t c1, std::int64_t l1, std::int64_t r1, std::int64_t c2,
                std::int64_t l2, std::int64_t r2) {
    using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(c1) * static_cast<u128>(l2) * static_cast<u128>(r2);
    const u128 rhs = static_cast<u128>(c2) * static_cast<u128>(l1) * static_cast<u128>(r1);
    return lhs < rhs;
}

}  // namespace

void count_words(std::string_view text, bool lowercase, WordCounts& counts) {
    for (const auto& token : word_tokenize(text)) {
        const std::string word = lowercase ? ascii_lowercase(token) : token;
        ++counts[word];
    }
}

Vocabulary train_wordpiece(const std::vector<std::string>& texts, std::size_t target_size,
                           std::int64_t min_pair_freq, bool lowercase) {
    WordCounts counts;
    for (const auto& text : texts) count_words(text, lowercase, counts);
    return train_wordpiece(counts, target_size, min_pair_freq, lowercase);
}

Vocabulary train_wordpiece(const WordCounts& counts, std::size_t target_size,
                           std::int64_t min_pair_freq, bool lowercase) {
    if (counts.empty()) throw ValidationError("tokenizer training corpus is empty");
    if (min_pair_freq < 1) throw ValidationError("min_pair_freq must be positive");

    // Alphabet: every observed character, raw and continuation form.
    std::set<std::string> alphabet;
    for (const auto& [word, freq] : counts)
        for (const auto& ch : utf8_chars(word)) {
            alphabet.insert(ch);
            alphabet.insert("##" + ch);
        }

    const std::size_t minimum = 5 + alphabet.size();
    if (target_size < minimum)
        throw ValidationError("vocab size " + std::to_string(target_size) +
                              " too small; minimum for this corpus is " +
                              std::to_string(minimum));

    Vocabulary vocab;
    vocab.target_size = target_size;
    vocab.lowercase = lowercase;
    auto add_token = [&vocab](const std::string& token) {
        if (vocab.token_ids.count(token)) return false;
        vocab.token_ids.emplace(token, static_cast<std::int32_t>(vocab.tokens.size()));
        vocab.tokens.push_back(token);
        return true;
    };
    for (const char* special : kSpecials) add_token(special);
    for (const auto& ch : alphabet) add_token(ch);

    // Word symbol sequences: first char raw, rest ##-prefixed. Words are
    // processed in sorted order so symbol ids (and everything downstream)
    // never depend on hash-map iteration.
    SymbolTable symbols;
    std::map<std::string, std::int64_t> sorted_counts(counts.begin(), counts.end());
    std::vector<TrainWord> words;
    words.reserve(sorted_counts.size());
    for (const auto& [word, freq] : sorted_counts) {
        TrainWord tw;
        tw.freq = freq;
        const auto chars = utf8_chars(word);
        for (std::size_t i = 0; i < chars.size(); ++i)
            tw.symbols.push_back(symbols.intern(i == 0 ? chars[i] : "##" + chars[i]));
        words.push_back(std::move(tw));
    }

    // Occurrence frequency per symbol and per adjacent pair, plus an index
    // of which words currently contain each pair.
    std::unordered_map<SymbolId, std::int64_t> symbol_freq;
    using Pair = std::pair<SymbolId, SymbolId>;
    std::unordered_map<Pair, std::int64_t, PairHash> pair_freq;
    std::unordered_map<Pair, std::set<std::size_t>, PairHash> pair_words;

    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        const TrainWord& tw = words[wi];
        for (std::size_t i = 0; i < tw.symbols.size(); ++i) {
            symbol_freq[tw.symbols[i]] += tw.freq;
            if (i + 1 < tw.symbols.size()) {
                const Pair p{tw.symbols[i], tw.symbols[i + 1]};
                pair_freq[p] += tw.freq;
                pair_words[p].insert(wi);
            }
        }
    }

    while (vocab.tokens.size() < target_size) {
        // Best pair by exact score, lexicographic (left, right) on ties.
        bool found = false;
        Pair best{};
        std::int64_t best_count = 0, best_left = 0, best_right = 0;
        for (const auto& [pair, count] : pair_freq) {
            if (count < min_pair_freq) continue;
            const std::int64_t lf = symbol_freq[pair.first];
            const std::int64_t rf = symbol_freq[pair.second];
            if (!found) {
                found = true;
            } else if (score_less(count, lf, rf, best_count, best_left, best_right)) {
                continue;
            } else if (!score_less(best_count, best_left, best_right, count, lf, rf)) {
                // scores tie exactly; compare (left, right) strings
                const auto& ln = symbols.names[pair.first];
                const auto& rn = symbols.names[pair.second];
                const auto& bln = symbols.names[best.first];
                const auto& brn = symbols.names[best.second];
                if (std::tie(ln, rn) >= std::tie(bln, brn)) continue;
            }
            best = pair;
            best_count = count;
            best_left = lf;
            best_right = rf;
        }
        if (!found) break;

        const std::string& left_name = symbols.names[best.first];
        const std::string& right_name = symbols.names[best.second];
        const std::string merged_name =
            left_name + (right_name.rfind("##", 0) == 0 ? right_name.substr(2) : right_name);
        const SymbolId merged = symbols.intern(merged_name);
        add_token(merged_name);

        // Rewrite every word containing the pair (left-to-right greedy
        // application) and refresh its contributions to the tallies.
        const auto touched = pair_words[best];  // copy; rewrites mutate the index
        for (const std::size_t wi : touched) {
            TrainWord& tw = words[wi];

            auto unregister = [&](const std::vector<SymbolId>& seq) {
                for (std::size_t i = 0; i < seq.size(); ++i) {
                    symbol_freq[seq[i]] -= tw.freq;
                    if (i + 1 < seq.size()) {
                        const Pair p{seq[i], seq[i + 1]};
                        auto it = pair_freq.find(p);
                        it->second -= tw.freq;
                        if (it->second <= 0) pair_freq.erase(it);
                        auto wit = pair_words.find(p);
                        wit->second.erase(wi);
                        if (wit->second.empty()) pair_words.erase(wit);
                    }
                }
            };
            auto register_seq = [&](const std::vector<SymbolId>& seq) {
                for (std::size_t i = 0; i < seq.size(); ++i) {
                    symbol_freq[seq[i]] += tw.freq;
                    if (i + 1 < seq.size()) {
                        const Pair p{seq[i], seq[i + 1]};
                        pair_freq[p] += tw.freq;
                        pair_words[p].insert(wi);
                    }
                }
            };

            unregister(tw.symbols);
            std::vector<SymbolId> rewritten;
            rewritten.reserve(tw.symbols.size());
            for (std::size_t i = 0; i < tw.symbols.size();) {
                if (i + 1 < tw.symbols.size() && tw.symbols[i] == best.first &&
                    tw.symbols[i + 1] == best.second) {
                    rewritten.push_back(merged);
                    i += 2;
                } else {
                    rewritten.push_back(tw.symbols[i]);
                    ++i;
                }
            }
            tw.symbols = std::move(rewritten);
            register_seq(tw.symbols);
        }
    }
    return vocab;
}

Encoding encode(const Vocabulary& vocab, std::string_view text, std::size_t max_len,
                bool wrap) {
    Encoding enc;
    auto push = [&](const std::string& token, std::int32_t id) {
        enc.tokens.push_back(token);
        enc.ids.push_back(id);
    };

    if (wrap) push("[CLS]", Vocabulary::kCls);

    const std::string prepared =
        vocab.lowercase ? ascii_lowercase(text) : std::string(text);
    for (const auto& word : word_tokenize(prepared)) {
        const auto chars = utf8_chars(word);
        std::vector<std::pair<std::string, std::int32_t>> pieces;
        bool ok = true;
        std::size_t start = 0;
        while (start < chars.size()) {
            // longest match: raw prefix at word start, ## continuation after
            std::size_t end = chars.size();
            std::int32_t found = -1;
            std::string found_token;
            for (; end > start; --end) {
                std::string candidate = start == 0 ? "" : "##";
                for (std::size_t i = start; i < end; ++i) candidate += chars[i];
                const std::int32_t id = vocab.id_of(candidate);
                if (id >= 0) {
                    found = id;
                    found_token = std::move(candidate);
                    break;
                }
            }
            if (found < 0) {
                ok = false;
                break;
            }
            pieces.emplace_back(std::move(found_token), found);
            start = end;
        }
        if (ok && !pieces.empty()) {
            for (auto& [token, id] : pieces) push(token, id);
        } else if (!chars.empty()) {
            push("[UNK]", Vocabulary::kUnk);
        }
    }

    if (wrap) push("[SEP]", Vocabulary::kSep);

    if (enc.ids.size() > max_len) {
        enc.truncated = true;
        enc.ids.resize(max_len);
        enc.tokens.resize(max_len);
        if (wrap && max_len > 0) {
            enc.ids.back() = Vocabulary::kSep;
            enc.tokens.back() = "[SEP]";
        }
    }
    return enc;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const auto& token : vocab.tokens) out << token << "\n";
}

Vocabulary load_vocabulary(const std::filesystem::path& path, bool lowercase) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());

    Vocabulary vocab;
    vocab.lowercase = lowercase;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (vocab.token_ids.count(line))
            throw ValidationError(path.string() + ": duplicate token " + line);
        vocab.token_ids.emplace(line, static_cast<std::int32_t>(vocab.tokens.size()));
        vocab.tokens.push_back(line);
    }
    for (std::size_t i = 0; i < 5; ++i) {
        if (vocab.tokens.size() <= i || vocab.tokens[i] != kSpecials[i])
            throw ValidationError(path.string() +
                                  ": specials [PAD][UNK][CLS][SEP][MASK] must occupy ids 0-4");
    }
    vocab.target_size = vocab.tokens.size();
    return vocab;
}

}  // namespace currikit
