#include "currikit/pipeline.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "currikit/error.hpp"
#include "currikit/hash.hpp"
#include "currikit/schedule.hpp"
#include "currikit/wordpiece.hpp"

namespace currikit {

namespace {

// Defaults carried as opaque trainer metadata when the config supplies none.
std::map<std::string, std::string> default_metadata() {
    return {
        {"learning_rate", "1e-5"},
        {"max_token_length", "50"},
        {"optimizer", "adam(beta1=0.9,beta2=0.999,eps=1e-8,weight_decay=0)"},
        {"precision", "fp16"},
    };
}

ScheduleConfig make_schedule_config(const PipelineConfig& cfg, ScheduleMode mode,
                                    int batch_size, int iid_epochs) {
    ScheduleConfig sc;
    sc.mode = mode;
    sc.ordering = cfg.ascending ? PhaseOrdering::Ascending : PhaseOrdering::Descending;
    sc.phases = cfg.phases;
    sc.epochs_per_phase = cfg.epochs_per_phase;
    sc.iid_epochs = iid_epochs;
    sc.batch_size = batch_size;
    sc.seed = cfg.seed;
    sc.holdout_fraction = cfg.holdout_fraction;
    sc.opaque_metadata = cfg.opaque_metadata.empty() ? default_metadata() : cfg.opaque_metadata;
    return sc;
}

void write_split(const SplitAssignment& split, double fraction, std::uint64_t seed,
                 const std::filesystem::path& path) {
    nlohmann::ordered_json obj;
    obj["kind"] = "split";
    obj["version"] = 1;
    obj["fraction"] = fraction;
    obj["seed"] = seed;
    obj["train_count"] = split.train_ids.size();
    obj["validation_count"] = split.validation_ids.size();
    obj["train_ids"] = split.train_ids;
    obj["validation_ids"] = split.validation_ids;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << obj.dump(2) << "\n";
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config: " + config_path.string());
    nlohmann::json obj;
    try {
        in >> obj;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(config_path.string() + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw ValidationError(config_path.string() + ": expected an object");

    PipelineConfig cfg;
    const auto base = config_path.parent_path();
    auto resolve = [&base](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() ? base / path : path;
    };
    for (const char* key : {"captions", "text", "tagged_corpus"})
        if (!obj.contains(key))
            throw ValidationError(config_path.string() + ": missing required key \"" +
                                  key + "\"");
    cfg.captions_path = resolve(obj.at("captions").get<std::string>());
    cfg.text_path = resolve(obj.at("text").get<std::string>());
    cfg.tagged_corpus_path = resolve(obj.at("tagged_corpus").get<std::string>());
    if (obj.contains("out_dir")) cfg.out_dir = resolve(obj.at("out_dir").get<std::string>());

    cfg.seed = obj.value("seed", std::uint64_t{0});
    cfg.jobs = obj.value("jobs", 1u);
    cfg.holdout_fraction = obj.value("holdout", 0.05);
    cfg.phases = obj.value("phases", 4);
    cfg.epochs_per_phase = obj.value("epochs_per_phase", 2);
    cfg.iid_epochs = obj.value("iid_epochs", 8);
    cfg.caption_batch_size = obj.value("caption_batch_size", 32);
    cfg.text_batch_size = obj.value("text_batch_size", 256);
    cfg.text_epochs = obj.value("text_epochs", 20);
    cfg.tagger_epochs = obj.value("tagger_epochs", 5u);
    cfg.tagger_heldout = obj.value("tagger_heldout", 0.1);
    cfg.tagger_seed = obj.value("tagger_seed", std::uint64_t{0});
    cfg.ascending = obj.value("ordering", "ascending") != "descending";
    cfg.emit_svg = obj.value("emit_svg", true);
    if (obj.contains("noun_tags"))
        cfg.noun_tags = obj.at("noun_tags").get<std::vector<std::string>>();
    if (obj.contains("metadata"))
        for (const auto& [key, value] : obj.at("metadata").items())
            cfg.opaque_metadata[key] = value.get<std::string>();
    return cfg;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.out_dir.empty()) throw ValidationError("pipeline needs an output directory");
    std::filesystem::create_directories(cfg.out_dir);

    PipelineResult result;
    auto artifact = [&](const std::string& name) {
        result.artifacts.push_back(cfg.out_dir / name);
        return cfg.out_dir / name;
    };
    const std::vector<std::string>& noun_tags =
        cfg.noun_tags.empty() ? default_noun_tags() : cfg.noun_tags;

    // 1. tagger
    const TaggedCorpus tagged = load_tagged_corpus(cfg.tagged_corpus_path);
    if (tagged.skipped_empty > 0)
        result.warnings.push_back(std::to_string(tagged.skipped_empty) +
                                  " empty sentence(s) skipped in tagged corpus");
    const TaggerTrainResult trained =
        train_tagger(tagged.sentences, cfg.tagger_epochs, cfg.tagger_seed, cfg.tagger_heldout);
    result.tagger_accuracy = trained.report.token_accuracy;
    save_tagger(trained.model, artifact("tagger.model"));

    // 2. scores (over the full dataset; scoring is seed-free)
    const std::vector<CaptionRecord> records = load_captions(cfg.captions_path);
    if (records.empty()) throw ValidationError("captions file has no records");
    const std::vector<ScoredSample> scored =
        score_dataset(trained.model, records, cfg.jobs, noun_tags);
    {
        nlohmann::ordered_json header;
        header["kind"] = "scores";
        header["version"] = 1;
        header["tagger_fingerprint"] = fingerprint_file((cfg.out_dir / "tagger.model").string());
        header["captions_fingerprint"] = fingerprint_file(cfg.captions_path.string());
        header["noun_tags"] = noun_tags;
        write_scores(scored, artifact("scores.jsonl"), header.dump());
    }

    // 3. histogram, boundaries, distribution plot data (full dataset)
    const DifficultyHistogram hist = build_histogram(scored);
    const PhaseBoundaries bounds = phase_boundaries(hist, cfg.phases);
    const std::string scores_fp = fingerprint_file((cfg.out_dir / "scores.jsonl").string());
    write_boundaries(bounds, hist, artifact("boundaries.json"), scores_fp);
    write_distribution(hist, bounds, artifact("dist.csv"), "csv");
    if (cfg.emit_svg) write_distribution(hist, bounds, artifact("dist.svg"), "svg");

    // 4. holdout split
    std::vector<std::string> all_ids;
    all_ids.reserve(scored.size());
    for (const auto& sample : scored) all_ids.push_back(sample.sample_id);
    const SplitAssignment split = holdout_split(all_ids, cfg.holdout_fraction, cfg.seed);
    write_split(split, cfg.holdout_fraction, cfg.seed, artifact("split.json"));

    std::unordered_set<std::string> train_set(split.train_ids.begin(), split.train_ids.end());
    std::vector<ScoredSample> train_scored;
    train_scored.reserve(split.train_ids.size());
    for (const auto& sample : scored)
        if (train_set.count(sample.sample_id)) train_scored.push_back(sample);
    if (train_scored.empty()) throw ValidationError("holdout split left no training samples");

    // 5. caption manifests (i.i.d. and curriculum over the train split)
    const ScheduleConfig iid_cfg =
        make_schedule_config(cfg, ScheduleMode::Iid, cfg.caption_batch_size, cfg.iid_epochs);
    if (auto warning = iid_cfg.budget_warning()) result.warnings.push_back(*warning);
    write_manifest(build_iid_schedule(split.train_ids, iid_cfg),
                   artifact("manifest-caption-iid.jsonl"));

    const ScheduleConfig cl_cfg = make_schedule_config(cfg, ScheduleMode::Curriculum,
                                                       cfg.caption_batch_size, cfg.iid_epochs);
    write_manifest(build_curriculum_schedule(train_scored, bounds, cl_cfg),
                   artifact("manifest-caption-cl.jsonl"));

    // 6. text pretraining manifest
    const TextCorpus text = load_text_corpus(cfg.text_path);
    if (text.dropped_blank > 0)
        result.warnings.push_back(std::to_string(text.dropped_blank) +
                                  " blank line(s) dropped from text corpus");
    if (text.documents.empty()) throw ValidationError("text corpus has no documents");
    std::vector<std::string> doc_ids;
    doc_ids.reserve(text.documents.size());
    for (const auto& doc : text.documents) doc_ids.push_back(doc.doc_id);
    write_manifest(
        build_text_pretrain_schedule(doc_ids, cfg.text_epochs, cfg.text_batch_size, cfg.seed),
        artifact("manifest-text.jsonl"));

    // 7. the four plan variants; manifests referenced by sibling file name
    struct Variant {
        const char* plan_name;
        bool with_text;
        const char* caption_manifest;
    };
    const Variant variants[] = {
        {"plan-c-iid.json", false, "manifest-caption-iid.jsonl"},
        {"plan-c-cl.json", false, "manifest-caption-cl.jsonl"},
        {"plan-tc-iid.json", true, "manifest-caption-iid.jsonl"},
        {"plan-tc-cl.json", true, "manifest-caption-cl.jsonl"},
    };
    for (const auto& variant : variants) {
        TrainingPlan plan;
        if (variant.with_text)
            plan.stages.push_back(PlanStage{
                "text", "manifest-text.jsonl",
                fingerprint_file((cfg.out_dir / "manifest-text.jsonl").string())});
        plan.stages.push_back(PlanStage{
            "caption", variant.caption_manifest,
            fingerprint_file((cfg.out_dir / variant.caption_manifest).string())});
        write_plan(plan, artifact(variant.plan_name));
    }

    // 8. stats over every plan
    {
        nlohmann::ordered_json all;
        all["kind"] = "stats";
        all["version"] = 1;
        nlohmann::ordered_json plans = nlohmann::ordered_json::object();
        for (const auto& variant : variants) {
            nlohmann::ordered_json stages = nlohmann::ordered_json::array();
            std::size_t start_batch = 0;
            for (const auto& [stage, manifest] :
                 load_plan_manifests(cfg.out_dir / variant.plan_name)) {
                const StageStats stats = schedule_stats(manifest, stage.name);
                auto obj = nlohmann::ordered_json::parse(stage_stats_json(stats));
                obj["start_batch"] = start_batch;
                start_batch += stats.total_batches;
                stages.push_back(obj);
            }
            nlohmann::ordered_json entry;
            entry["stages"] = stages;
            entry["total_batches"] = start_batch;
            plans[variant.plan_name] = entry;
        }
        all["plans"] = plans;
        std::ofstream out(artifact("stats.json"), std::ios::binary);
        if (!out) throw ValidationError("cannot write stats.json");
        out << all.dump(2) << "\n";
    }

    return result;
}

}  // namespace currikit
