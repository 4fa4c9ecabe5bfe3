#pragma once

// Difficulty scoring: noun tokens per caption, maximum over an image's
// captions. The maximum is taken so one rich caption is never diluted by a
// sparse sibling.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "currikit/corpus.hpp"
#include "currikit/tagger.hpp"

namespace currikit {

struct ScoredSample {
    std::string sample_id;
    std::int64_t difficulty = 0;  // = max(caption_scores)
    std::vector<std::int64_t> caption_scores;
};

// {NN, NNS, NNP, NNPS}
const std::vector<std::string>& default_noun_tags();

std::int64_t noun_count(const std::vector<std::string>& tags,
                        const std::vector<std::string>& noun_tags = default_noun_tags());

std::int64_t score_caption(const PerceptronTagger& model, const std::string& caption,
                           const std::vector<std::string>& noun_tags = default_noun_tags());

ScoredSample score_record(const PerceptronTagger& model, const CaptionRecord& record,
                          const std::vector<std::string>& noun_tags = default_noun_tags());

// Order-preserving parallel map over records; output is a pure function of
// (model, records) regardless of parallelism.
std::vector<ScoredSample> score_dataset(const PerceptronTagger& model,
                                        const std::vector<CaptionRecord>& records,
                                        unsigned parallelism = 1,
                                        const std::vector<std::string>& noun_tags =
                                            default_noun_tags());

// scores JSONL: optional self-describing header line, then
// {"sample_id":...,"difficulty":...,"caption_scores":[...]} per record.
void write_scores(const std::vector<ScoredSample>& samples, const std::filesystem::path& path,
                  const std::string& header_json = std::string());
std::vector<ScoredSample> load_scores(const std::filesystem::path& path);

}  // namespace currikit
