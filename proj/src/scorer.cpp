#include "currikit/scorer.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "currikit/error.hpp"

namespace currikit {

const std::vector<std::string>& default_noun_tags() {
    static const std::vector<std::string> tags = {"NN", "NNS", "NNP", "NNPS"};
    return tags;
}

std::int64_t noun_count(const std::vector<std::string>& tags,
                        const std::vector<std::string>& noun_tags) {
    std::int64_t count = 0;
    for (const auto& tag : tags)
        if (std::find(noun_tags.begin(), noun_tags.end(), tag) != noun_tags.end()) ++count;
    return count;
}

std::int64_t score_caption(const PerceptronTagger& model, const std::string& caption,
                           const std::vector<std::string>& noun_tags) {
    const auto words = word_tokenize(caption);
    if (words.empty()) return 0;
    return noun_count(tag(model, words), noun_tags);
}

ScoredSample score_record(const PerceptronTagger& model, const CaptionRecord& record,
                          const std::vector<std::string>& noun_tags) {
    ScoredSample sample;
    sample.sample_id = record.sample_id;
    sample.caption_scores.reserve(record.captions.size());
    for (const auto& caption : record.captions)
        sample.caption_scores.push_back(score_caption(model, caption, noun_tags));
    sample.difficulty =
        *std::max_element(sample.caption_scores.begin(), sample.caption_scores.end());
    return sample;
}

std::vector<ScoredSample> score_dataset(const PerceptronTagger& model,
                                        const std::vector<CaptionRecord>& records,
                                        unsigned parallelism,
                                        const std::vector<std::string>& noun_tags) {
    std::vector<ScoredSample> out(records.size());
    if (records.empty()) return out;
    if (parallelism == 0) parallelism = 1;
    parallelism = std::min<unsigned>(parallelism, static_cast<unsigned>(records.size()));

    if (parallelism == 1) {
        for (std::size_t i = 0; i < records.size(); ++i)
            out[i] = score_record(model, records[i], noun_tags);
        return out;
    }

    // Static chunking into a pre-sized output keeps order and results
    // independent of the thread count.
    std::vector<std::thread> workers;
    workers.reserve(parallelism);
    const std::size_t n = records.size();
    for (unsigned w = 0; w < parallelism; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += parallelism)
                out[i] = score_record(model, records[i], noun_tags);
        });
    }
    for (auto& worker : workers) worker.join();
    return out;
}

void write_scores(const std::vector<ScoredSample>& samples, const std::filesystem::path& path,
                  const std::string& header_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    if (!header_json.empty()) out << header_json << "\n";
    for (const auto& sample : samples) {
        nlohmann::ordered_json obj;
        obj["sample_id"] = sample.sample_id;
        obj["difficulty"] = sample.difficulty;
        obj["caption_scores"] = sample.caption_scores;
        out << obj.dump() << "\n";
    }
}

std::vector<ScoredSample> load_scores(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());

    std::vector<ScoredSample> samples;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("malformed JSON at line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        if (line_no == 1 && obj.is_object() && obj.contains("kind")) continue;  // header
        if (!obj.is_object() || !obj.contains("sample_id") || !obj.contains("difficulty"))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected scores record with sample_id/difficulty");

        ScoredSample sample;
        sample.sample_id = obj.at("sample_id").get<std::string>();
        sample.difficulty = obj.at("difficulty").get<std::int64_t>();
        if (obj.contains("caption_scores"))
            sample.caption_scores = obj.at("caption_scores").get<std::vector<std::int64_t>>();
        else
            sample.caption_scores = {sample.difficulty};

        if (sample.difficulty < 0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative difficulty");
        if (sample.caption_scores.empty() ||
            sample.difficulty != *std::max_element(sample.caption_scores.begin(),
                                                   sample.caption_scores.end()))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": difficulty is not the max of caption_scores");
        if (!seen.insert(sample.sample_id).second)
            throw ValidationError("duplicate sample_id \"" + sample.sample_id + "\" at line " +
                                  std::to_string(line_no));
        samples.push_back(std::move(sample));
    }
    return samples;
}

}  // namespace currikit
