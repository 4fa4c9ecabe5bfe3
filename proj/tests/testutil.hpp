#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "currikit/corpus.hpp"
#include "currikit/tagger.hpp"

namespace testutil {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("currikit-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Unambiguous toy corpus: every word type has exactly one gold tag, so the
// perceptron memorizes it.
inline std::vector<currikit::TaggedSentence> toy_corpus() {
    using currikit::TaggedSentence;
    std::vector<TaggedSentence> corpus;
    const TaggedSentence a{{{"the", "DT"}, {"dog", "NN"}, {"runs", "VBZ"}}};
    const TaggedSentence b{{{"the", "DT"}, {"cat", "NN"}, {"sleeps", "VBZ"}}};
    const TaggedSentence c{{{"a", "DT"}, {"bird", "NN"}, {"sings", "VBZ"}}};
    const TaggedSentence d{
        {{"the", "DT"}, {"dog", "NN"}, {"runs", "VBZ"}, {"near", "IN"}, {"a", "DT"},
         {"tree", "NN"}}};
    for (int i = 0; i < 10; ++i) {
        corpus.push_back(a);
        corpus.push_back(b);
        corpus.push_back(c);
        corpus.push_back(d);
    }
    return corpus;
}

inline currikit::PerceptronTagger toy_tagger() {
    return currikit::train_tagger(toy_corpus(), 5, 0, 0.0).model;
}

}  // namespace testutil
