#include "currikit/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "currikit/error.hpp"
#include "currikit/hash.hpp"
#include "currikit/rng.hpp"

namespace currikit {

namespace {

constexpr const char* kModelHeader = "currikit-tagger v1";
constexpr const char* kBoundaryMark = "<s>";
constexpr const char* kAfterMark = "</s>";

// Last `n` code points of a UTF-8 string (whole string if shorter).
std::string utf8_suffix(const std::string& s, std::size_t n) {
    std::size_t count = 0;
    std::size_t i = s.size();
    while (i > 0 && count < n) {
        --i;
        if ((static_cast<unsigned char>(s[i]) & 0xc0) != 0x80) ++count;
    }
    return s.substr(i);
}

std::size_t utf8_length(const std::string& s) {
    std::size_t count = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xc0) != 0x80) ++count;
    return count;
}

struct WeightCell {
    double value = 0.0;
    double total = 0.0;      // accumulated value over instances (lazy)
    std::uint64_t stamp = 0;  // instance counter at last change
};

class Trainer {
public:
    explicit Trainer(std::vector<std::string> tagset) : tagset_(std::move(tagset)) {
        for (std::size_t i = 0; i < tagset_.size(); ++i) tag_index_[tagset_[i]] = i;
    }

    const std::string& predict(const std::vector<std::string>& features) {
        scores_.assign(tagset_.size(), 0.0);
        for (const auto& feature : features) {
            auto it = cells_.find(feature);
            if (it == cells_.end()) continue;
            for (const auto& [tag, cell] : it->second) scores_[tag_index_.at(tag)] += cell.value;
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores_.size(); ++i)
            if (scores_[i] > scores_[best]) best = i;  // ties keep the lowest index
        return tagset_[best];
    }

    void learn(const std::vector<std::string>& features, const std::string& gold,
               const std::string& predicted) {
        ++instances_;
        if (gold == predicted) return;
        for (const auto& feature : features) {
            adjust(feature, gold, +1.0);
            adjust(feature, predicted, -1.0);
        }
    }

    // Averaged weights: total accumulated value per instance step, divided
    // by the number of instances. Zero averages are dropped.
    std::unordered_map<std::string, std::unordered_map<std::string, double>> averaged() const {
        std::unordered_map<std::string, std::unordered_map<std::string, double>> out;
        if (instances_ == 0) return out;
        for (const auto& [feature, tags] : cells_) {
            for (const auto& [tag, cell] : tags) {
                const double total =
                    cell.total + cell.value * static_cast<double>(instances_ - cell.stamp);
                const double avg = total / static_cast<double>(instances_);
                if (avg != 0.0) out[feature][tag] = avg;
            }
        }
        return out;
    }

private:
    void adjust(const std::string& feature, const std::string& tag, double delta) {
        WeightCell& cell = cells_[feature][tag];
        cell.total += cell.value * static_cast<double>(instances_ - cell.stamp);
        cell.stamp = instances_;
        cell.value += delta;
    }

    std::vector<std::string> tagset_;
    std::unordered_map<std::string, std::size_t> tag_index_;
    std::unordered_map<std::string, std::unordered_map<std::string, WeightCell>> cells_;
    std::vector<double> scores_;
    std::uint64_t instances_ = 0;
};

std::size_t argmax_tag(const PerceptronTagger& model,
                       const std::unordered_map<std::string, std::size_t>& tag_index,
                       const std::vector<std::string>& features,
                       std::vector<double>& scores) {
    scores.assign(model.tagset.size(), 0.0);
    for (const auto& feature : features) {
        auto it = model.weights.find(feature);
        if (it == model.weights.end()) continue;
        for (const auto& [tag, weight] : it->second) scores[tag_index.at(tag)] += weight;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

}  // namespace

std::vector<std::string> token_features(const std::vector<std::string>& words,
                                        std::size_t index,
                                        const std::string& prev_tag) {
    const std::string& word = words[index];
    const std::string lower = ascii_lowercase(word);

    std::vector<std::string> features;
    features.reserve(10);
    features.push_back("w=" + lower);
    const std::size_t len = utf8_length(lower);
    if (len >= 1) features.push_back("suf1=" + utf8_suffix(lower, 1));
    if (len >= 2) features.push_back("suf2=" + utf8_suffix(lower, 2));
    if (len >= 3) features.push_back("suf3=" + utf8_suffix(lower, 3));
    if (!word.empty() && word[0] >= 'A' && word[0] <= 'Z') features.push_back("shape=cap");
    if (std::any_of(word.begin(), word.end(),
                    [](char c) { return c >= '0' && c <= '9'; }))
        features.push_back("shape=digit");
    if (word.find('-') != std::string::npos) features.push_back("shape=hyphen");
    features.push_back("pt=" + prev_tag);
    features.push_back("pw=" + (index > 0 ? ascii_lowercase(words[index - 1])
                                          : std::string(kBoundaryMark)));
    features.push_back("nw=" + (index + 1 < words.size() ? ascii_lowercase(words[index + 1])
                                                         : std::string(kAfterMark)));
    return features;
}

TaggerTrainResult train_tagger(const std::vector<TaggedSentence>& corpus,
                               std::uint32_t epochs,
                               std::uint64_t seed,
                               double heldout_fraction) {
    if (epochs == 0) throw ValidationError("epochs must be positive");
    if (corpus.empty()) throw ValidationError("training corpus is empty");
    if (heldout_fraction < 0.0 || heldout_fraction >= 1.0)
        throw ValidationError("heldout fraction must be in [0,1)");
    if (heldout_fraction > 0.0 && corpus.size() < 2)
        throw ValidationError("need at least 2 sentences to hold out a validation split");

    // Tagset = sorted distinct tags over the full input corpus.
    std::set<std::string> tags;
    for (const auto& sentence : corpus)
        for (const auto& [word, tag] : sentence.tokens) tags.insert(tag);
    std::vector<std::string> tagset(tags.begin(), tags.end());

    // Seeded split; stream (0,0) is the reserved split stream. Order within
    // each side follows the input corpus.
    const std::size_t n = corpus.size();
    std::size_t heldout = 0;
    if (heldout_fraction > 0.0) {
        heldout = static_cast<std::size_t>(
            std::floor(heldout_fraction * static_cast<double>(n) + 0.5));
        heldout = std::clamp<std::size_t>(heldout, 1, n - 1);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Xoshiro256StarStar split_rng(stream_seed(seed, 0, 0));
    fisher_yates_shuffle(order, split_rng);
    std::vector<bool> is_heldout(n, false);
    for (std::size_t i = 0; i < heldout; ++i) is_heldout[order[i]] = true;

    std::vector<const TaggedSentence*> train;
    std::vector<TaggedSentence> eval_split;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_heldout[i])
            eval_split.push_back(corpus[i]);
        else
            train.push_back(&corpus[i]);
    }

    Trainer trainer(tagset);
    std::vector<std::size_t> epoch_order(train.size());
    for (std::uint32_t epoch = 1; epoch <= epochs; ++epoch) {
        std::iota(epoch_order.begin(), epoch_order.end(), 0);
        Xoshiro256StarStar rng(stream_seed(seed, 0, epoch));
        fisher_yates_shuffle(epoch_order, rng);
        for (std::size_t si : epoch_order) {
            const TaggedSentence& sentence = *train[si];
            std::vector<std::string> words;
            words.reserve(sentence.tokens.size());
            for (const auto& [word, tag] : sentence.tokens) words.push_back(word);

            std::string prev_tag = kBoundaryMark;
            for (std::size_t i = 0; i < words.size(); ++i) {
                const auto features = token_features(words, i, prev_tag);
                const std::string& predicted = trainer.predict(features);
                trainer.learn(features, sentence.tokens[i].second, predicted);
                prev_tag = predicted;
            }
        }
    }

    TaggerTrainResult result;
    result.model.tagset = std::move(tagset);
    result.model.weights = trainer.averaged();
    result.model.epochs = epochs;
    result.model.seed = seed;
    result.model.corpus_fingerprint = tagged_corpus_fingerprint(corpus);

    if (heldout > 0) {
        result.report = evaluate_tagger(result.model, eval_split);
    } else {
        std::vector<TaggedSentence> train_copy;
        train_copy.reserve(train.size());
        for (const auto* s : train) train_copy.push_back(*s);
        result.report = evaluate_tagger(result.model, train_copy);
        result.report.resubstitution = true;
    }
    return result;
}

std::vector<std::string> tag(const PerceptronTagger& model,
                             const std::vector<std::string>& words) {
    std::vector<std::string> output;
    if (words.empty()) return output;
    if (model.tagset.empty()) throw ValidationError("model has an empty tagset");
    output.reserve(words.size());

    std::unordered_map<std::string, std::size_t> tag_index;
    for (std::size_t i = 0; i < model.tagset.size(); ++i) tag_index[model.tagset[i]] = i;

    std::vector<double> scores;
    std::string prev_tag = kBoundaryMark;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto features = token_features(words, i, prev_tag);
        const std::size_t best = argmax_tag(model, tag_index, features, scores);
        output.push_back(model.tagset[best]);
        prev_tag = output.back();
    }
    return output;
}

TaggerEvalReport evaluate_tagger(const PerceptronTagger& model,
                                 const std::vector<TaggedSentence>& corpus) {
    if (corpus.empty()) throw ValidationError("evaluation corpus is empty");

    TaggerEvalReport report;
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;
    for (const auto& sentence : corpus) {
        ++report.sentence_count;
        std::vector<std::string> words;
        words.reserve(sentence.tokens.size());
        for (const auto& [word, tag] : sentence.tokens) words.push_back(word);
        const auto predicted = tag(model, words);
        for (std::size_t i = 0; i < words.size(); ++i) {
            ++report.token_count;
            if (predicted[i] == sentence.tokens[i].second)
                ++report.correct_count;
            else
                ++confusion[{sentence.tokens[i].second, predicted[i]}];
        }
    }
    report.token_accuracy = report.token_count == 0
                                ? 0.0
                                : static_cast<double>(report.correct_count) /
                                      static_cast<double>(report.token_count);

    std::vector<std::tuple<std::string, std::string, std::size_t>> pairs;
    pairs.reserve(confusion.size());
    for (const auto& [key, count] : confusion) pairs.emplace_back(key.first, key.second, count);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) > std::get<2>(b);
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    if (pairs.size() > 10) pairs.resize(10);
    report.confusion_top = std::move(pairs);
    return report;
}

void save_tagger(const PerceptronTagger& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << kModelHeader << "\n";
    out << "# tagset";
    for (const auto& tag : model.tagset) out << ' ' << tag;
    out << "\n";
    out << "# epochs " << model.epochs << "\n";
    out << "# seed " << model.seed << "\n";
    out << "# corpus-fingerprint " << model.corpus_fingerprint << "\n";

    std::map<std::string, std::map<std::string, double>> sorted;
    for (const auto& [feature, tags] : model.weights)
        for (const auto& [t, w] : tags) sorted[feature][t] = w;
    char buf[64];
    for (const auto& [feature, tags] : sorted) {
        for (const auto& [t, w] : tags) {
            std::snprintf(buf, sizeof buf, "%.17g", w);
            out << feature << '\t' << t << '\t' << buf << "\n";
        }
    }
}

PerceptronTagger load_tagger(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kModelHeader)
        throw ValidationError(path.string() + ": not a currikit-tagger v1 file");

    PerceptronTagger model;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string key;
            meta >> key;
            if (key == "tagset") {
                std::string tag;
                while (meta >> tag) model.tagset.push_back(tag);
            } else if (key == "epochs") {
                meta >> model.epochs;
            } else if (key == "seed") {
                meta >> model.seed;
            } else if (key == "corpus-fingerprint") {
                meta >> model.corpus_fingerprint;
            }
            continue;
        }
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                       : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected feature<TAB>tag<TAB>weight");
        const std::string feature = line.substr(0, t1);
        const std::string tag_name = line.substr(t1 + 1, t2 - t1 - 1);
        const double weight = std::strtod(line.c_str() + t2 + 1, nullptr);
        if (!std::isfinite(weight))
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": non-finite weight");
        if (std::find(model.tagset.begin(), model.tagset.end(), tag_name) == model.tagset.end())
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": tag " +
                                  tag_name + " not in declared tagset");
        model.weights[feature][tag_name] = weight;
    }
    if (model.tagset.empty())
        throw ValidationError(path.string() + ": missing tagset metadata");
    return model;
}

std::string tagged_corpus_fingerprint(const std::vector<TaggedSentence>& corpus) {
    Fnv1a64 h;
    for (const auto& sentence : corpus) {
        for (const auto& [word, tag] : sentence.tokens) {
            h.update(word);
            h.update("\t");
            h.update(tag);
            h.update("\n");
        }
        h.update("\n");
    }
    return to_hex(h.digest());
}

}  // namespace currikit
