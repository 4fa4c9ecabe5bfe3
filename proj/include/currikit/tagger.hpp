#pragma once

// Averaged-perceptron part-of-speech tagger. Greedy left-to-right decoding;
// one weight update per mistagged token; final weights are the running
// average over all prediction steps, which is what tag() uses.
//
// A trained model is immutable; tag() may be called from many threads.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "currikit/corpus.hpp"

namespace currikit {

struct PerceptronTagger {
    std::vector<std::string> tagset;  // sorted; index = tie-break priority
    // feature -> tag -> averaged weight
    std::unordered_map<std::string, std::unordered_map<std::string, double>> weights;
    std::uint32_t epochs = 0;
    std::uint64_t seed = 0;
    std::string corpus_fingerprint;  // hex64 of the training corpus
};

struct TaggerEvalReport {
    double token_accuracy = 0.0;
    std::size_t sentence_count = 0;
    std::size_t token_count = 0;
    std::size_t correct_count = 0;
    // (gold tag, predicted tag, count) for mismatches, most frequent first
    std::vector<std::tuple<std::string, std::string, std::size_t>> confusion_top;
    bool resubstitution = false;  // heldout_fraction was 0
};

struct TaggerTrainResult {
    PerceptronTagger model;
    TaggerEvalReport report;
};

// Trains on a seeded shuffle of the corpus each epoch; when
// heldout_fraction > 0 a seeded split reserves that share of sentences
// (at least one on each side) for the evaluation report.
TaggerTrainResult train_tagger(const std::vector<TaggedSentence>& corpus,
                               std::uint32_t epochs,
                               std::uint64_t seed,
                               double heldout_fraction);

std::vector<std::string> tag(const PerceptronTagger& model,
                             const std::vector<std::string>& words);

TaggerEvalReport evaluate_tagger(const PerceptronTagger& model,
                                 const std::vector<TaggedSentence>& corpus);

// Text model file: header `currikit-tagger v1`, `#`-prefixed metadata lines
// (tagset order, epochs, seed, corpus fingerprint), then
// feature<TAB>tag<TAB>weight rows sorted lexicographically. Weights are
// printed with 17 significant digits so reloads are bit-exact.
void save_tagger(const PerceptronTagger& model, const std::filesystem::path& path);
PerceptronTagger load_tagger(const std::filesystem::path& path);

// Feature strings for the token at `index`; prev_tag is the previously
// predicted tag ("<s>" at sentence start). Exposed for tests.
std::vector<std::string> token_features(const std::vector<std::string>& words,
                                        std::size_t index,
                                        const std::string& prev_tag);

std::string tagged_corpus_fingerprint(const std::vector<TaggedSentence>& corpus);

}  // namespace currikit
