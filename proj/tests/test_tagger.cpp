#include <doctest.h>

#include <sstream>
#include <thread>

#include "currikit/error.hpp"
#include "currikit/tagger.hpp"
#include "testutil.hpp"

using namespace currikit;
using testutil::TempDir;

TEST_CASE("unambiguous corpus is memorized perfectly") {
    const auto corpus = testutil::toy_corpus();
    const auto result = train_tagger(corpus, 5, 0, 0.1);
    CHECK(result.report.token_accuracy == 1.0);
    CHECK(!result.report.resubstitution);
    CHECK(result.report.sentence_count == 4);  // 10% of 40
}

TEST_CASE("toy model tags lexically forced sentences") {
    const auto model = testutil::toy_tagger();
    CHECK(tag(model, {"the", "dog", "sleeps"}) ==
          std::vector<std::string>{"DT", "NN", "VBZ"});
    CHECK(tag(model, {}) == std::vector<std::string>{});
}

TEST_CASE("unseen words get some tag from the tagset, length preserved") {
    const auto model = testutil::toy_tagger();
    const std::vector<std::string> words{"zyx", "qqq", "the"};
    const auto tags = tag(model, words);
    REQUIRE(tags.size() == words.size());
    for (const auto& t : tags)
        CHECK(std::find(model.tagset.begin(), model.tagset.end(), t) != model.tagset.end());
}

TEST_CASE("training preconditions") {
    const auto corpus = testutil::toy_corpus();
    CHECK_THROWS_AS(train_tagger(corpus, 0, 0, 0.1), ValidationError);
    CHECK_THROWS_AS(train_tagger({}, 5, 0, 0.0), ValidationError);
    const std::vector<TaggedSentence> one{corpus.front()};
    CHECK_THROWS_AS(train_tagger(one, 5, 0, 0.1), ValidationError);
    CHECK_NOTHROW(train_tagger(one, 1, 0, 0.0));
}

TEST_CASE("training is deterministic: same corpus, epochs, seed") {
    const auto corpus = testutil::toy_corpus();
    const auto a = train_tagger(corpus, 3, 9, 0.1);
    const auto b = train_tagger(corpus, 3, 9, 0.1);
    REQUIRE(a.model.weights.size() == b.model.weights.size());
    for (const auto& [feature, tags] : a.model.weights) {
        const auto it = b.model.weights.find(feature);
        REQUIRE(it != b.model.weights.end());
        CHECK(tags == it->second);  // bit-identical doubles
    }
    const auto c = train_tagger(corpus, 3, 10, 0.1);
    CHECK(a.model.corpus_fingerprint == c.model.corpus_fingerprint);
}

TEST_CASE("evaluate_tagger computes the exact fraction") {
    const auto model = testutil::toy_tagger();
    // "dog" is NN under the model; gold says VBZ for the second token
    std::vector<TaggedSentence> corpus{{{{"the", "DT"}, {"dog", "VBZ"}}}};
    const auto report = evaluate_tagger(model, corpus);
    CHECK(report.token_count == 2);
    CHECK(report.correct_count == 1);
    CHECK(report.token_accuracy == 0.5);
    REQUIRE(report.confusion_top.size() == 1);
    CHECK(std::get<0>(report.confusion_top[0]) == "VBZ");
    CHECK(std::get<1>(report.confusion_top[0]) == "NN");

    CHECK_THROWS_AS(evaluate_tagger(model, {}), ValidationError);
}

TEST_CASE("evaluate on training corpus reaches 1.0") {
    const auto corpus = testutil::toy_corpus();
    const auto model = testutil::toy_tagger();
    CHECK(evaluate_tagger(model, corpus).token_accuracy == 1.0);
}

TEST_CASE("a single-tag model on an all-gold corpus scores 1.0") {
    // no weights at all: the only candidate tag always wins
    PerceptronTagger model;
    model.tagset = {"NN"};
    std::vector<TaggedSentence> corpus{{{{"dog", "NN"}, {"cat", "NN"}}},
                                       {{{"tree", "NN"}}}};
    const auto report = evaluate_tagger(model, corpus);
    CHECK(report.token_accuracy == 1.0);
    CHECK(report.token_count == 3);
}

TEST_CASE("model round-trips bit-exactly through the text format") {
    TempDir dir("tagger");
    const auto model = testutil::toy_tagger();
    save_tagger(model, dir.file("m.model"));
    const auto reloaded = load_tagger(dir.file("m.model"));

    CHECK(reloaded.tagset == model.tagset);
    CHECK(reloaded.epochs == model.epochs);
    CHECK(reloaded.seed == model.seed);
    CHECK(reloaded.corpus_fingerprint == model.corpus_fingerprint);
    REQUIRE(reloaded.weights.size() == model.weights.size());
    for (const auto& [feature, tags] : model.weights) {
        const auto it = reloaded.weights.find(feature);
        REQUIRE(it != reloaded.weights.end());
        CHECK(tags == it->second);
    }
    // and the reloaded model predicts identically
    CHECK(tag(reloaded, {"the", "dog", "runs"}) == tag(model, {"the", "dog", "runs"}));

    save_tagger(reloaded, dir.file("m2.model"));
    CHECK(testutil::read_file(dir.file("m.model")) == testutil::read_file(dir.file("m2.model")));
}

TEST_CASE("load_tagger rejects junk") {
    TempDir dir("tagger");
    testutil::write_file(dir.file("junk.model"), "not a model\n");
    CHECK_THROWS_AS(load_tagger(dir.file("junk.model")), ValidationError);
    testutil::write_file(dir.file("noinf.model"),
                         "currikit-tagger v1\n# tagset NN\nw=x\tNN\tinf\n");
    CHECK_THROWS_AS(load_tagger(dir.file("noinf.model")), ValidationError);
}

TEST_CASE("token_features carries shape and context") {
    const std::vector<std::string> words{"Big", "x-ray", "B2"};
    const auto f0 = token_features(words, 0, "<s>");
    CHECK(std::find(f0.begin(), f0.end(), "w=big") != f0.end());
    CHECK(std::find(f0.begin(), f0.end(), "shape=cap") != f0.end());
    CHECK(std::find(f0.begin(), f0.end(), "pw=<s>") != f0.end());
    CHECK(std::find(f0.begin(), f0.end(), "nw=x-ray") != f0.end());
    const auto f1 = token_features(words, 1, "JJ");
    CHECK(std::find(f1.begin(), f1.end(), "shape=hyphen") != f1.end());
    CHECK(std::find(f1.begin(), f1.end(), "pt=JJ") != f1.end());
    const auto f2 = token_features(words, 2, "NN");
    CHECK(std::find(f2.begin(), f2.end(), "shape=digit") != f2.end());
    CHECK(std::find(f2.begin(), f2.end(), "nw=</s>") != f2.end());
}

TEST_CASE("tagging is deterministic across calls") {
    const auto model = testutil::toy_tagger();
    const std::vector<std::string> words{"a", "tree", "near", "the", "cat"};
    const auto first = tag(model, words);
    for (int i = 0; i < 10; ++i) CHECK(tag(model, words) == first);
}

TEST_CASE("a shared model tags identically from many threads") {
    const auto model = testutil::toy_tagger();
    const std::vector<std::string> words{"the", "dog", "runs", "near", "a", "tree"};
    const auto expected = tag(model, words);

    std::vector<std::thread> workers;
    std::vector<int> mismatches(8, 0);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] {
            for (int i = 0; i < 200; ++i)
                if (tag(model, words) != expected) ++mismatches[static_cast<std::size_t>(t)];
        });
    for (auto& worker : workers) worker.join();
    for (const int count : mismatches) CHECK(count == 0);
}

TEST_CASE("load_tagger rejects weight rows outside the declared tagset") {
    testutil::TempDir dir("tagger");
    testutil::write_file(dir.file("bad.model"),
                         "currikit-tagger v1\n# tagset NN DT\nw=x\tZZ\t1.0\n");
    CHECK_THROWS_WITH_AS(load_tagger(dir.file("bad.model")),
                         doctest::Contains("not in declared tagset"), ValidationError);
}
