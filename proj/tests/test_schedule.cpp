#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "currikit/error.hpp"
#include "currikit/rng.hpp"
#include "currikit/schedule.hpp"
#include "testutil.hpp"

using namespace currikit;
using testutil::TempDir;

namespace {

std::vector<ScoredSample> toy_samples() {
    const std::vector<std::int64_t> difficulties{0, 1, 1, 2, 3, 3, 4, 7};
    std::vector<ScoredSample> samples;
    for (std::size_t i = 0; i < difficulties.size(); ++i)
        samples.push_back(ScoredSample{"s" + std::to_string(i), difficulties[i],
                                       {difficulties[i]}});
    return samples;
}

PhaseBoundaries toy_bounds() {
    return quartile_boundaries(build_histogram(toy_samples()));
}

std::vector<std::string> ids_of(const std::vector<ScoredSample>& samples) {
    std::vector<std::string> ids;
    for (const auto& sample : samples) ids.push_back(sample.sample_id);
    return ids;
}

// Multiset of ids in one (phase, epoch) of a manifest.
std::multiset<std::string> epoch_ids(const BatchManifest& manifest, int phase, int epoch) {
    std::multiset<std::string> ids;
    for (const auto& entry : manifest.entries)
        if (entry.phase == phase && entry.epoch == epoch)
            for (const auto& id : entry.sample_ids) ids.insert(id);
    return ids;
}

}  // namespace

TEST_CASE("holdout_split arithmetic, order, determinism") {
    std::vector<std::string> ids;
    for (int i = 0; i < 100; ++i) ids.push_back("id" + std::to_string(i));

    const auto split = holdout_split(ids, 0.05, 0);
    CHECK(split.validation_ids.size() == 5);
    CHECK(split.train_ids.size() == 95);

    // disjoint and exhaustive
    std::set<std::string> all(split.train_ids.begin(), split.train_ids.end());
    for (const auto& id : split.validation_ids) CHECK(all.insert(id).second);
    CHECK(all.size() == ids.size());

    // order restored within each side
    CHECK(std::is_sorted(split.train_ids.begin(), split.train_ids.end(),
                         [&](const std::string& a, const std::string& b) {
                             return std::find(ids.begin(), ids.end(), a) <
                                    std::find(ids.begin(), ids.end(), b);
                         }));

    const auto again = holdout_split(ids, 0.05, 0);
    CHECK(again.train_ids == split.train_ids);
    CHECK(again.validation_ids == split.validation_ids);

    const auto other_seed = holdout_split(ids, 0.05, 1);
    CHECK(other_seed.validation_ids != split.validation_ids);

    const auto zero = holdout_split(ids, 0.0, 0);
    CHECK(zero.validation_ids.empty());
    CHECK(zero.train_ids == ids);

    CHECK_THROWS_AS(holdout_split(ids, 1.0, 0), ValidationError);
}

TEST_CASE("curriculum schedule over the toy multiset: 22 batches") {
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto manifest = build_curriculum_schedule(toy_samples(), toy_bounds(), config);

    // pools 3,4,6,8 with batch 2: 2+2+3+4 batches per epoch, 2 epochs each
    CHECK(manifest.entries.size() == 22);
    std::map<int, std::size_t> batches_per_phase;
    for (const auto& entry : manifest.entries) ++batches_per_phase[entry.phase];
    CHECK(batches_per_phase == std::map<int, std::size_t>{{1, 4}, {2, 4}, {3, 6}, {4, 8}});

    // strictly ordered by (phase, epoch, batch)
    for (std::size_t i = 1; i < manifest.entries.size(); ++i) {
        const auto& a = manifest.entries[i - 1];
        const auto& b = manifest.entries[i];
        CHECK(std::tie(a.phase, a.epoch, a.batch_index) <
              std::tie(b.phase, b.epoch, b.batch_index));
    }
}

TEST_CASE("pool membership across epochs: easiest everywhere, hardest only late") {
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto samples = toy_samples();
    const auto manifest = build_curriculum_schedule(samples, toy_bounds(), config);

    // s0 (difficulty 0 <= b1) appears in every epoch of every phase
    for (int phase = 1; phase <= 4; ++phase)
        for (int epoch = 1; epoch <= 2; ++epoch)
            CHECK(epoch_ids(manifest, phase, epoch).count("s0") == 1);
    // s7 (difficulty 7 > b3 = 3) appears only in phase 4
    for (int phase = 1; phase <= 3; ++phase)
        for (int epoch = 1; epoch <= 2; ++epoch)
            CHECK(epoch_ids(manifest, phase, epoch).count("s7") == 0);
    CHECK(epoch_ids(manifest, 4, 1).count("s7") == 1);
    CHECK(epoch_ids(manifest, 4, 2).count("s7") == 1);
}

TEST_CASE("each epoch is an exact permutation of its pool") {
    ScheduleConfig config;
    config.batch_size = 3;
    config.holdout_fraction = 0.0;
    const auto samples = toy_samples();
    const auto bounds = toy_bounds();
    const auto manifest = build_curriculum_schedule(samples, bounds, config);

    for (int phase = 1; phase <= 4; ++phase) {
        const auto pool = phase_pool(samples, bounds, phase);
        const std::multiset<std::string> expected(pool.begin(), pool.end());
        for (int epoch = 1; epoch <= config.epochs_per_phase; ++epoch)
            CHECK(epoch_ids(manifest, phase, epoch) == expected);
    }
}

TEST_CASE("manifest file bytes are identical across runs") {
    TempDir dir("manifest");
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    config.opaque_metadata = {{"learning_rate", "1e-5"}};
    const auto manifest = build_curriculum_schedule(toy_samples(), toy_bounds(), config);
    write_manifest(manifest, dir.file("a.jsonl"));
    const auto manifest2 = build_curriculum_schedule(toy_samples(), toy_bounds(), config);
    write_manifest(manifest2, dir.file("b.jsonl"));
    CHECK(testutil::read_file(dir.file("a.jsonl")) == testutil::read_file(dir.file("b.jsonl")));

    ScheduleConfig other = config;
    other.seed = 1;
    write_manifest(build_curriculum_schedule(toy_samples(), toy_bounds(), other),
                   dir.file("c.jsonl"));
    CHECK(testutil::read_file(dir.file("a.jsonl")) != testutil::read_file(dir.file("c.jsonl")));
}

TEST_CASE("manifest round-trips through JSONL") {
    TempDir dir("manifest");
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto manifest = build_curriculum_schedule(toy_samples(), toy_bounds(), config);
    write_manifest(manifest, dir.file("m.jsonl"));
    const auto reloaded = load_manifest(dir.file("m.jsonl"));
    CHECK(reloaded.fingerprint == manifest.fingerprint);
    REQUIRE(reloaded.entries.size() == manifest.entries.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        CHECK(reloaded.entries[i].phase == manifest.entries[i].phase);
        CHECK(reloaded.entries[i].epoch == manifest.entries[i].epoch);
        CHECK(reloaded.entries[i].batch_index == manifest.entries[i].batch_index);
        CHECK(reloaded.entries[i].sample_ids == manifest.entries[i].sample_ids);
    }
    CHECK(reloaded.config.batch_size == 2);
    CHECK(reloaded.config.mode == ScheduleMode::Curriculum);
}

TEST_CASE("descending ordering reverses the pool sequence") {
    ScheduleConfig config;
    config.ordering = PhaseOrdering::Descending;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto samples = toy_samples();
    const auto bounds = toy_bounds();
    const auto manifest = build_curriculum_schedule(samples, bounds, config);

    const auto pool4 = phase_pool(samples, bounds, 4);
    CHECK(epoch_ids(manifest, 1, 1) == std::multiset<std::string>(pool4.begin(), pool4.end()));
    const auto pool1 = phase_pool(samples, bounds, 1);
    CHECK(epoch_ids(manifest, 4, 1) == std::multiset<std::string>(pool1.begin(), pool1.end()));
}

TEST_CASE("iid schedule: permutations of all ids each epoch") {
    ScheduleConfig config;
    config.mode = ScheduleMode::Iid;
    config.batch_size = 2;
    config.iid_epochs = 8;
    const auto samples = toy_samples();
    const auto manifest = build_iid_schedule(ids_of(samples), config);

    CHECK(manifest.entries.size() == 32);  // 4 batches x 8 epochs
    const auto all_ids = ids_of(samples);
    const std::multiset<std::string> all(all_ids.begin(), all_ids.end());
    std::set<std::vector<std::string>> distinct_orders;
    for (int epoch = 1; epoch <= 8; ++epoch) {
        CHECK(epoch_ids(manifest, 0, epoch) == all);
        std::vector<std::string> order;
        for (const auto& entry : manifest.entries)
            if (entry.epoch == epoch)
                order.insert(order.end(), entry.sample_ids.begin(), entry.sample_ids.end());
        distinct_orders.insert(order);
    }
    CHECK(distinct_orders.size() > 1);  // epochs shuffle independently

    CHECK_THROWS_AS(build_iid_schedule({}, config), ValidationError);

    const auto singleton = build_iid_schedule({"only"}, config);
    CHECK(singleton.entries.size() == 8);
    for (const auto& entry : singleton.entries)
        CHECK(entry.sample_ids == std::vector<std::string>{"only"});
}

TEST_CASE("text pretraining schedule defaults") {
    std::vector<std::string> docs;
    for (int i = 0; i < 512; ++i) docs.push_back("line-" + std::to_string(i + 1));
    const auto manifest = build_text_pretrain_schedule(docs, 20, 256, 0);
    CHECK(manifest.entries.size() == 40);  // 2 batches x 20 epochs
    for (const auto& entry : manifest.entries) CHECK(entry.sample_ids.size() == 256);

    std::vector<std::string> hundred(docs.begin(), docs.begin() + 100);
    const auto short_batches = build_text_pretrain_schedule(hundred, 20, 256, 0);
    CHECK(short_batches.entries.size() == 20);
    for (const auto& entry : short_batches.entries) CHECK(entry.sample_ids.size() == 100);
}

TEST_CASE("all batches full except possibly the last per epoch") {
    Xoshiro256StarStar rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::string> ids;
        const std::size_t n = 1 + rng.next_below(300);
        for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
        ScheduleConfig config;
        config.mode = ScheduleMode::Iid;
        config.iid_epochs = 2;
        config.batch_size = 1 + static_cast<int>(rng.next_below(17));
        config.seed = rng.next();
        const auto manifest = build_iid_schedule(ids, config);
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const auto& entry = manifest.entries[i];
            const bool last_of_epoch = i + 1 == manifest.entries.size() ||
                                       manifest.entries[i + 1].epoch != entry.epoch;
            if (!last_of_epoch)
                CHECK(entry.sample_ids.size() ==
                      static_cast<std::size_t>(config.batch_size));
            else
                CHECK(entry.sample_ids.size() <=
                      static_cast<std::size_t>(config.batch_size));
        }
    }
}

TEST_CASE("monotone epoch cost under ascending ordering") {
    Xoshiro256StarStar rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + rng.next_below(300);
        std::vector<ScoredSample> samples;
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = static_cast<std::int64_t>(rng.next_below(15));
            samples.push_back(ScoredSample{"r" + std::to_string(i), d, {d}});
        }
        ScheduleConfig config;
        config.batch_size = 1 + static_cast<int>(rng.next_below(9));
        config.holdout_fraction = 0.0;
        config.seed = rng.next();
        const auto bounds = quartile_boundaries(build_histogram(samples));
        const auto manifest = build_curriculum_schedule(samples, bounds, config);

        std::map<int, std::size_t> batches_in_first_epoch;
        for (const auto& entry : manifest.entries)
            if (entry.epoch == 1) ++batches_in_first_epoch[entry.phase];
        std::size_t previous = 0;
        for (const auto& [phase, batches] : batches_in_first_epoch) {
            CHECK(batches >= previous);
            previous = batches;
        }
    }
}

TEST_CASE("composed 40+22 batch plan carries the stage offset") {
    TempDir dir("plan62");
    std::vector<std::string> docs;
    for (int i = 0; i < 512; ++i) docs.push_back("line-" + std::to_string(i + 1));
    write_manifest(build_text_pretrain_schedule(docs, 20, 256, 0), dir.file("text.jsonl"));

    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    write_manifest(build_curriculum_schedule(toy_samples(), toy_bounds(), config),
                   dir.file("caption.jsonl"));

    const auto plan = compose_t_plus_c(dir.file("text.jsonl"), dir.file("caption.jsonl"));
    write_plan(plan, dir.file("plan.json"));
    const auto stages = load_plan_manifests(dir.file("plan.json"));
    REQUIRE(stages.size() == 2);
    CHECK(stages[0].second.entries.size() == 40);  // 512 docs, batch 256, 20 epochs
    CHECK(stages[1].second.entries.size() == 22);
    // 62 batches total; the caption stage starts right after batch 40
    CHECK(stages[0].second.entries.size() + stages[1].second.entries.size() == 62);
}

TEST_CASE("budget identity: curriculum processes at most the iid budget") {
    const auto samples = toy_samples();
    const auto bounds = toy_bounds();
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto manifest = build_curriculum_schedule(samples, bounds, config);

    std::size_t processed = 0;
    for (const auto& entry : manifest.entries) processed += entry.sample_ids.size();
    std::size_t pool_sum = 0;
    for (int p = 1; p <= 4; ++p) pool_sum += phase_pool(samples, bounds, p).size();
    CHECK(processed == static_cast<std::size_t>(config.epochs_per_phase) * pool_sum);
    CHECK(processed <= static_cast<std::size_t>(config.iid_epochs) * samples.size());
}

TEST_CASE("schedule_stats: toy multiset ratio is exactly 42/64") {
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    const auto manifest = build_curriculum_schedule(toy_samples(), toy_bounds(), config);
    const auto stats = schedule_stats(manifest);
    CHECK(stats.total_samples_processed == 42);
    CHECK(stats.distinct_ids == 8);
    CHECK(stats.epoch_count == 8);
    CHECK(stats.cost_ratio == 0.65625);
    REQUIRE(stats.phases.size() == 4);
    CHECK(stats.phases[0].pool_size == 3);
    CHECK(stats.phases[3].pool_size == 8);

    ScheduleConfig iid_config;
    iid_config.mode = ScheduleMode::Iid;
    iid_config.batch_size = 2;
    const auto iid = build_iid_schedule(ids_of(toy_samples()), iid_config);
    CHECK(schedule_stats(iid).cost_ratio == 1.0);
}

TEST_CASE("plans wrap manifests with text always first") {
    TempDir dir("plan");
    ScheduleConfig config;
    config.batch_size = 2;
    config.holdout_fraction = 0.0;
    write_manifest(build_curriculum_schedule(toy_samples(), toy_bounds(), config),
                   dir.file("caption.jsonl"));
    write_manifest(build_text_pretrain_schedule({"d1", "d2", "d3"}, 20, 256, 0),
                   dir.file("text.jsonl"));

    const auto plan =
        compose_t_plus_c(dir.file("text.jsonl"), dir.file("caption.jsonl"));
    REQUIRE(plan.stages.size() == 2);
    CHECK(plan.stages[0].name == "text");
    CHECK(plan.stages[1].name == "caption");
    write_plan(plan, dir.file("plan.json"));

    const auto loaded = load_plan_manifests(dir.file("plan.json"));
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].first.name == "text");
    CHECK(loaded[0].second.config.iid_epochs == 20);
    CHECK(loaded[1].second.config.mode == ScheduleMode::Curriculum);

    // total batches 20 + 22, text stage first
    const std::size_t text_batches = loaded[0].second.entries.size();
    const std::size_t caption_batches = loaded[1].second.entries.size();
    CHECK(text_batches == 20);  // 3 docs, batch 256 -> 1 batch x 20 epochs
    CHECK(caption_batches == 22);

    const auto single = compose_t_plus_c(std::nullopt, dir.file("caption.jsonl"));
    REQUIRE(single.stages.size() == 1);
    CHECK(single.stages[0].name == "caption");
}

TEST_CASE("plan fingerprint mismatch is detected") {
    TempDir dir("plan");
    ScheduleConfig config;
    config.mode = ScheduleMode::Iid;
    config.batch_size = 2;
    write_manifest(build_iid_schedule({"a", "b"}, config), dir.file("m.jsonl"));
    auto plan = compose_t_plus_c(std::nullopt, dir.file("m.jsonl"));
    write_plan(plan, dir.file("p.json"));
    // corrupt the manifest after composing
    testutil::write_file(dir.file("m.jsonl"), "{\"kind\":\"manifest\"}\n");
    CHECK_THROWS_AS(load_plan_manifests(dir.file("p.json")), ValidationError);
}

TEST_CASE("budget warning fires only on unequal budgets") {
    ScheduleConfig config;
    CHECK(!config.budget_warning().has_value());  // 4*2 == 8
    config.iid_epochs = 10;
    CHECK(config.budget_warning().has_value());
}

TEST_CASE("empty first pool is rejected") {
    // boundaries inconsistent with the samples: smallest difficulty above b1
    std::vector<ScoredSample> samples{{"a", 9, {9}}, {"b", 9, {9}}};
    PhaseBoundaries bounds;
    bounds.phases = 4;
    bounds.boundaries = {1, 2, 3, 9};
    ScheduleConfig config;
    config.holdout_fraction = 0.0;
    CHECK_THROWS_WITH_AS(build_curriculum_schedule(samples, bounds, config),
                         doctest::Contains("first phase empty"), ValidationError);
}
