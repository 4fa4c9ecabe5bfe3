#pragma once

// Corpus ingestion: image-caption records (JSONL), tag-annotated sentences
// (two-column CoNLL), plain text documents, and the word tokenizer shared by
// the tagger and the subword trainer.
//
// All loaders are single-pass streaming readers; the returned collections
// are plain values and safe to share across threads.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace currikit {

struct CaptionRecord {
    std::string sample_id;
    std::string image_ref;              // opaque, never dereferenced
    std::vector<std::string> captions;  // non-empty, each non-blank
};

struct TextDocument {
    std::string doc_id;
    std::string text;
};

struct TaggedSentence {
    std::vector<std::pair<std::string, std::string>> tokens;  // (word, tag)
};

struct TaggedCorpus {
    std::vector<TaggedSentence> sentences;
    std::size_t skipped_empty = 0;  // consecutive blank lines collapse
};

struct TextCorpus {
    std::vector<TextDocument> documents;
    std::size_t dropped_blank = 0;
};

enum class DocSeparator { Line, BlankLine };

// Penn-Treebank-style tag inventory (word tags plus punctuation tags) used
// to validate annotated corpora by default.
const std::vector<std::string>& default_ptb_tagset();

// Streams records out of a JSONL captions file, invoking `sink` per record.
// Throws ValidationError on schema violations, duplicate sample_ids, or
// malformed JSON, always naming the offending line.
void for_each_caption(const std::filesystem::path& path,
                      const std::function<void(CaptionRecord&&)>& sink);

std::vector<CaptionRecord> load_captions(const std::filesystem::path& path);

void write_captions(const std::vector<CaptionRecord>& records,
                    const std::filesystem::path& path);

// Two-column `word<TAB>tag` reader, blank line = sentence break. Tags are
// checked against `tagset` (pass an empty list to accept any tag).
TaggedCorpus load_tagged_corpus(const std::filesystem::path& path,
                                const std::vector<std::string>& tagset = default_ptb_tagset());

TextCorpus load_text_corpus(const std::filesystem::path& path,
                            DocSeparator separator = DocSeparator::Line);

// Maximal runs of letters/digits/apostrophes (non-ASCII bytes count as
// letters); every other printable character becomes its own token. Pure and
// case-preserving.
std::vector<std::string> word_tokenize(std::string_view text);

// Returns the byte offset of the first invalid UTF-8 byte, or nullopt.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes);

std::string ascii_lowercase(std::string_view word);

}  // namespace currikit
