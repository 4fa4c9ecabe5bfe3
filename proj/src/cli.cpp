#include "currikit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "currikit/error.hpp"
#include "currikit/hash.hpp"
#include "currikit/pipeline.hpp"
#include "currikit/schedule.hpp"
#include "currikit/wordpiece.hpp"

namespace currikit {

namespace {

// Collects the structured run log each command must emit to stderr.
class RunLog {
public:
    RunLog(std::string command, std::vector<std::string> flags)
        : command_(std::move(command)), flags_(std::move(flags)),
          start_(std::chrono::steady_clock::now()) {}

    void input(const std::filesystem::path& path) {
        inputs_[path.string()] = fingerprint_file(path.string());
    }
    void output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }
    void warn(const std::string& message) { warnings_.push_back(message); }

    void emit(const std::string& error = std::string()) const {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        nlohmann::ordered_json obj;
        obj["command"] = command_;
        obj["flags"] = flags_;
        nlohmann::ordered_json in = nlohmann::ordered_json::object();
        for (const auto& [path, fp] : inputs_) in[path] = fp;
        obj["inputs"] = in;
        obj["outputs"] = outputs_;
        obj["wall_time_s"] = seconds;
        obj["warnings"] = warnings_;
        if (!error.empty()) obj["error"] = error;
        std::cerr << obj.dump() << std::endl;
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::string command_;
    std::vector<std::string> flags_;
    std::map<std::string, std::string> inputs_;
    std::vector<std::string> outputs_;
    std::vector<std::string> warnings_;
    std::chrono::steady_clock::time_point start_;
};

struct GlobalFlags {
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned jobs = 1;
    bool quiet = false;

    std::uint64_t resolve_seed(std::uint64_t config_default = 0) const {
        if (seed_given) return seed;
        if (const char* env = std::getenv("CURRIKIT_SEED")) {
            try {
                return std::stoull(env);
            } catch (...) {
                throw ValidationError("CURRIKIT_SEED is not an integer: " + std::string(env));
            }
        }
        return config_default;
    }
};

void note(const GlobalFlags& global, const std::string& message) {
    if (!global.quiet) std::cerr << "currikit: " << message << "\n";
}

std::map<std::string, std::string> parse_metadata(const std::vector<std::string>& pairs) {
    std::map<std::string, std::string> metadata;
    for (const auto& pair : pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--metadata", "expected key=value, got: " + pair);
        metadata[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    return metadata;
}

// ---------------------------------------------------------------- commands

int cmd_train_tagger(const GlobalFlags& global, RunLog& log, const std::string& corpus,
                     std::uint32_t epochs, double heldout, const std::string& out) {
    const TaggedCorpus tagged = load_tagged_corpus(corpus);
    log.input(corpus);
    if (tagged.skipped_empty > 0) {
        log.warn(std::to_string(tagged.skipped_empty) + " empty sentence(s) skipped");
        note(global, std::to_string(tagged.skipped_empty) + " empty sentence(s) skipped");
    }
    const TaggerTrainResult result =
        train_tagger(tagged.sentences, epochs, global.resolve_seed(), heldout);
    save_tagger(result.model, out);
    log.output(out);

    nlohmann::ordered_json report;
    report["token_accuracy"] = result.report.token_accuracy;
    report["sentence_count"] = result.report.sentence_count;
    report["token_count"] = result.report.token_count;
    report["resubstitution"] = result.report.resubstitution;
    std::cout << report.dump() << "\n";
    return 0;
}

int cmd_eval_tagger(RunLog& log, const std::string& model_path, const std::string& corpus) {
    const PerceptronTagger model = load_tagger(model_path);
    const TaggedCorpus tagged = load_tagged_corpus(corpus);
    log.input(model_path);
    log.input(corpus);
    const TaggerEvalReport report = evaluate_tagger(model, tagged.sentences);

    nlohmann::ordered_json obj;
    obj["token_accuracy"] = report.token_accuracy;
    obj["sentence_count"] = report.sentence_count;
    obj["token_count"] = report.token_count;
    nlohmann::ordered_json confusion = nlohmann::ordered_json::array();
    for (const auto& [gold, predicted, count] : report.confusion_top)
        confusion.push_back({{"gold", gold}, {"predicted", predicted}, {"count", count}});
    obj["confusion_top"] = confusion;
    std::cout << obj.dump() << "\n";
    return 0;
}

int cmd_score(const GlobalFlags& global, RunLog& log, const std::string& captions,
              const std::string& tagger_path, const std::vector<std::string>& noun_tags,
              const std::string& out) {
    const PerceptronTagger model = load_tagger(tagger_path);
    const std::vector<CaptionRecord> records = load_captions(captions);
    log.input(captions);
    log.input(tagger_path);

    const auto& tags = noun_tags.empty() ? default_noun_tags() : noun_tags;
    const std::vector<ScoredSample> scored = score_dataset(model, records, global.jobs, tags);

    nlohmann::ordered_json header;
    header["kind"] = "scores";
    header["version"] = 1;
    header["tagger_fingerprint"] = fingerprint_file(tagger_path);
    header["captions_fingerprint"] = fingerprint_file(captions);
    header["noun_tags"] = tags;
    write_scores(scored, out, header.dump());
    log.output(out);
    return 0;
}

int cmd_quartiles(RunLog& log, const std::string& scores_path, int phases,
                  const std::string& out) {
    const std::vector<ScoredSample> scored = load_scores(scores_path);
    log.input(scores_path);
    const DifficultyHistogram hist = build_histogram(scored);
    const PhaseBoundaries bounds = phase_boundaries(hist, phases);
    write_boundaries(bounds, hist, out, fingerprint_file(scores_path));
    log.output(out);
    return 0;
}

int cmd_plot_distribution(RunLog& log, const std::string& scores_path, int phases,
                          const std::string& format, const std::string& out) {
    const std::vector<ScoredSample> scored = load_scores(scores_path);
    log.input(scores_path);
    const DifficultyHistogram hist = build_histogram(scored);
    write_distribution(hist, phase_boundaries(hist, phases), out, format);
    log.output(out);
    return 0;
}

int cmd_schedule_captions(const GlobalFlags& global, RunLog& log,
                          const std::string& scores_path, const std::string& boundaries_path,
                          ScheduleConfig config, const std::string& split_out,
                          const std::string& out) {
    const std::vector<ScoredSample> scored = load_scores(scores_path);
    log.input(scores_path);

    std::vector<std::string> ids;
    ids.reserve(scored.size());
    for (const auto& sample : scored) ids.push_back(sample.sample_id);
    const SplitAssignment split = holdout_split(ids, config.holdout_fraction, config.seed);

    std::vector<ScoredSample> train_scored;
    if (config.holdout_fraction > 0) {
        std::unordered_map<std::string, bool> in_train;
        for (const auto& id : split.train_ids) in_train[id] = true;
        for (const auto& sample : scored)
            if (in_train.count(sample.sample_id)) train_scored.push_back(sample);
    } else {
        train_scored = scored;
    }

    if (auto warning = config.budget_warning()) {
        log.warn(*warning);
        note(global, *warning);
    }

    BatchManifest manifest;
    if (config.mode == ScheduleMode::Curriculum) {
        if (boundaries_path.empty())
            throw CLI::RequiredError("--boundaries (required for curriculum mode)");
        const PhaseBoundaries bounds = load_boundaries(boundaries_path);
        log.input(boundaries_path);
        config.phases = bounds.phases;
        manifest = build_curriculum_schedule(train_scored, bounds, config);
    } else {
        std::vector<std::string> train_ids;
        train_ids.reserve(train_scored.size());
        for (const auto& sample : train_scored) train_ids.push_back(sample.sample_id);
        manifest = build_iid_schedule(train_ids, config);
    }
    write_manifest(manifest, out);
    log.output(out);

    if (!split_out.empty()) {
        nlohmann::ordered_json obj;
        obj["kind"] = "split";
        obj["version"] = 1;
        obj["fraction"] = config.holdout_fraction;
        obj["seed"] = config.seed;
        obj["train_count"] = split.train_ids.size();
        obj["validation_count"] = split.validation_ids.size();
        obj["train_ids"] = split.train_ids;
        obj["validation_ids"] = split.validation_ids;
        std::ofstream file(split_out, std::ios::binary);
        if (!file) throw ValidationError("cannot write file: " + split_out);
        file << obj.dump(2) << "\n";
        log.output(split_out);
    }
    return 0;
}

int cmd_schedule_text(RunLog& log, const std::string& text_path, int epochs, int batch_size,
                      std::uint64_t seed, const std::string& doc_sep, const std::string& out) {
    const TextCorpus corpus = load_text_corpus(
        text_path, doc_sep == "blank-line" ? DocSeparator::BlankLine : DocSeparator::Line);
    log.input(text_path);
    if (corpus.dropped_blank > 0)
        log.warn(std::to_string(corpus.dropped_blank) + " blank line(s) dropped");
    if (corpus.documents.empty()) throw ValidationError("text corpus has no documents");

    std::vector<std::string> doc_ids;
    doc_ids.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) doc_ids.push_back(doc.doc_id);
    write_manifest(build_text_pretrain_schedule(doc_ids, epochs, batch_size, seed), out);
    log.output(out);
    return 0;
}

int cmd_compose(RunLog& log, const std::string& text_manifest,
                const std::string& caption_manifest, const std::string& out) {
    std::optional<std::filesystem::path> text;
    if (!text_manifest.empty()) {
        text = text_manifest;
        log.input(text_manifest);
    }
    log.input(caption_manifest);
    write_plan(compose_t_plus_c(text, caption_manifest), out);
    log.output(out);
    return 0;
}

int cmd_stats(RunLog& log, const std::string& manifest_path, const std::string& out) {
    log.input(manifest_path);

    // The file self-describes: a plan object or a manifest header line.
    std::ifstream probe(manifest_path, std::ios::binary);
    if (!probe) throw ValidationError("cannot open file: " + manifest_path);
    std::string first_line;
    std::getline(probe, first_line);
    probe.close();
    bool is_plan = false;
    try {
        is_plan = nlohmann::json::parse(first_line).value("kind", "") == "plan";
    } catch (...) {
        // plans are pretty-printed; the first line alone may not parse
        std::ifstream whole(manifest_path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(whole)),
                          std::istreambuf_iterator<char>());
        try {
            is_plan = nlohmann::json::parse(bytes).value("kind", "") == "plan";
        } catch (...) {
            throw ValidationError(manifest_path + ": not a manifest or plan file");
        }
    }

    nlohmann::ordered_json report;
    report["kind"] = "stats";
    report["version"] = 1;
    if (is_plan) {
        nlohmann::ordered_json stages = nlohmann::ordered_json::array();
        std::size_t start_batch = 0;
        for (const auto& [stage, manifest] : load_plan_manifests(manifest_path)) {
            const StageStats stats = schedule_stats(manifest, stage.name);
            auto obj = nlohmann::ordered_json::parse(stage_stats_json(stats));
            obj["start_batch"] = start_batch;
            start_batch += stats.total_batches;
            stages.push_back(obj);
        }
        report["stages"] = stages;
        report["total_batches"] = start_batch;
    } else {
        const BatchManifest manifest = load_manifest(manifest_path);
        const StageStats stats = schedule_stats(manifest);
        report["stages"] = nlohmann::ordered_json::array(
            {nlohmann::ordered_json::parse(stage_stats_json(stats))});
        report["total_batches"] = stats.total_batches;
    }

    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!out.empty()) {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw ValidationError("cannot write file: " + out);
        file << text << "\n";
        log.output(out);
    }
    return 0;
}

int cmd_train_tokenizer(RunLog& log, const std::vector<std::string>& corpora,
                        std::size_t vocab_size, std::int64_t min_pair_freq, bool lowercase,
                        const std::string& out) {
    WordCounts counts;
    for (const auto& path : corpora) {
        log.input(path);
        // captions JSONL vs plain text: sniff the first non-blank line
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw ValidationError("cannot open file: " + path);
        std::string first_line;
        while (std::getline(probe, first_line) && first_line.empty()) {
        }
        probe.close();
        bool is_captions = false;
        try {
            const auto obj = nlohmann::json::parse(first_line);
            is_captions = obj.is_object() && obj.contains("sample_id");
        } catch (...) {
        }

        if (is_captions) {
            for_each_caption(path, [&](CaptionRecord&& rec) {
                for (const auto& caption : rec.captions)
                    count_words(caption, lowercase, counts);
            });
        } else {
            const TextCorpus corpus = load_text_corpus(path);
            for (const auto& doc : corpus.documents) count_words(doc.text, lowercase, counts);
        }
    }
    const Vocabulary vocab = train_wordpiece(counts, vocab_size, min_pair_freq, lowercase);
    save_vocabulary(vocab, out);
    log.output(out);
    return 0;
}

int cmd_encode(RunLog& log, const std::string& vocab_path, std::size_t max_len, bool wrap,
               bool lowercase, const std::string& input, const std::string& out) {
    const Vocabulary vocab = load_vocabulary(vocab_path, lowercase);
    log.input(vocab_path);

    std::istream* in = &std::cin;
    std::ifstream file_in;
    if (!input.empty()) {
        file_in.open(input, std::ios::binary);
        if (!file_in) throw ValidationError("cannot open file: " + input);
        in = &file_in;
        log.input(input);
    }
    std::ostream* os = &std::cout;
    std::ofstream file_out;
    if (!out.empty()) {
        file_out.open(out, std::ios::binary);
        if (!file_out) throw ValidationError("cannot write file: " + out);
        os = &file_out;
        log.output(out);
    }

    std::string line;
    while (std::getline(*in, line)) {
        const Encoding enc = encode(vocab, line, max_len, wrap);
        nlohmann::ordered_json obj;
        obj["tokens"] = enc.tokens;
        obj["ids"] = enc.ids;
        obj["truncated"] = enc.truncated;
        *os << obj.dump() << "\n";
    }
    return 0;
}

int cmd_pipeline(const GlobalFlags& global, RunLog& log, const std::string& config_path,
                 const std::string& out_dir) {
    PipelineConfig config = load_pipeline_config(config_path);
    log.input(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (global.seed_given || std::getenv("CURRIKIT_SEED"))
        config.seed = global.resolve_seed(config.seed);
    if (global.jobs != 1) config.jobs = global.jobs;

    const PipelineResult result = run_pipeline(config);
    for (const auto& warning : result.warnings) {
        log.warn(warning);
        note(global, warning);
    }
    for (const auto& path : result.artifacts) log.output(path);
    note(global, "tagger heldout accuracy: " + std::to_string(result.tagger_accuracy));
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"currikit - curriculum data scheduling toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags global;
    app.add_option("--seed", global.seed, "global PRNG seed (overrides CURRIKIT_SEED)")
        ->each([&global](const std::string&) { global.seed_given = true; });
    app.add_option("--jobs", global.jobs, "worker threads for scoring")->default_val(1);
    app.add_flag("--quiet", global.quiet, "suppress informational notes on stderr");

    // train-tagger
    auto* tt = app.add_subcommand("train-tagger", "train the PoS tagger on a CoNLL corpus");
    std::string tt_corpus, tt_out;
    std::uint32_t tt_epochs = 5;
    double tt_heldout = 0.1;
    tt->add_option("--corpus", tt_corpus, "two-column CoNLL corpus")->required();
    tt->add_option("--epochs", tt_epochs, "training epochs")->default_val(5);
    tt->add_option("--heldout", tt_heldout, "validation fraction")->default_val(0.1);
    tt->add_option("--out", tt_out, "model output path")->required();

    // eval-tagger
    auto* et = app.add_subcommand("eval-tagger", "evaluate a tagger on a CoNLL corpus");
    std::string et_model, et_corpus;
    et->add_option("--model", et_model)->required();
    et->add_option("--corpus", et_corpus)->required();

    // score
    auto* sc = app.add_subcommand("score", "score caption difficulty (max nouns per image)");
    std::string sc_captions, sc_tagger, sc_out;
    std::vector<std::string> sc_noun_tags;
    sc->add_option("--captions", sc_captions)->required();
    sc->add_option("--tagger", sc_tagger)->required();
    sc->add_option("--noun-tags", sc_noun_tags, "override the counted tag set")
        ->delimiter(',');
    sc->add_option("--out", sc_out)->required();

    // quartiles
    auto* qt = app.add_subcommand("quartiles", "compute phase boundaries from scores");
    std::string qt_scores, qt_out;
    int qt_phases = 4;
    qt->add_option("--scores", qt_scores)->required();
    qt->add_option("--phases", qt_phases)->default_val(4)->check(CLI::PositiveNumber);
    qt->add_option("--out", qt_out)->required();

    // plot-distribution
    auto* pd = app.add_subcommand("plot-distribution", "emit the cumulative distribution");
    std::string pd_scores, pd_format = "csv", pd_out;
    int pd_phases = 4;
    pd->add_option("--scores", pd_scores)->required();
    pd->add_option("--phases", pd_phases)->default_val(4)->check(CLI::PositiveNumber);
    pd->add_option("--format", pd_format)->check(CLI::IsMember({"csv", "svg"}))
        ->default_val("csv");
    pd->add_option("--out", pd_out)->required();

    // schedule
    auto* sd = app.add_subcommand("schedule", "materialize a batch manifest");
    std::string sd_scores, sd_boundaries, sd_text, sd_mode = "curriculum",
                sd_ordering = "ascending", sd_doc_sep = "line", sd_split_out, sd_out;
    int sd_batch = 32, sd_epp = 2, sd_iid_epochs = 8, sd_text_epochs = 20;
    double sd_holdout = 0.05;
    std::vector<std::string> sd_metadata;
    sd->add_option("--scores", sd_scores, "scores JSONL (caption scheduling)");
    sd->add_option("--boundaries", sd_boundaries, "boundaries JSON (curriculum mode)");
    sd->add_option("--text", sd_text, "text corpus (text pretraining scheduling)");
    sd->add_option("--mode", sd_mode)->check(CLI::IsMember({"curriculum", "iid"}))
        ->default_val("curriculum");
    sd->add_option("--ordering", sd_ordering)
        ->check(CLI::IsMember({"ascending", "descending"}))
        ->default_val("ascending");
    sd->add_option("--batch-size", sd_batch)->check(CLI::PositiveNumber);
    sd->add_option("--epochs-per-phase", sd_epp)->default_val(2)->check(CLI::PositiveNumber);
    sd->add_option("--iid-epochs", sd_iid_epochs)->default_val(8)->check(CLI::PositiveNumber);
    sd->add_option("--epochs", sd_text_epochs, "epochs for --text scheduling")
        ->default_val(20)
        ->check(CLI::PositiveNumber);
    sd->add_option("--holdout", sd_holdout)->default_val(0.05);
    sd->add_option("--doc-sep", sd_doc_sep)->check(CLI::IsMember({"line", "blank-line"}))
        ->default_val("line");
    sd->add_option("--split-out", sd_split_out, "also write the holdout split JSON");
    sd->add_option("--metadata", sd_metadata, "opaque key=value carried into the header");
    sd->add_option("--out", sd_out)->required();

    // compose
    auto* cp = app.add_subcommand("compose", "compose manifests into a training plan");
    std::string cp_text, cp_caption, cp_out;
    cp->add_option("--text", cp_text, "text-stage manifest (optional)");
    cp->add_option("--caption", cp_caption, "caption-stage manifest")->required();
    cp->add_option("--out", cp_out)->required();

    // stats
    auto* st = app.add_subcommand("stats", "report pool sizes, batch counts, cost ratio");
    std::string st_manifest, st_out;
    st->add_option("--manifest", st_manifest, "manifest or plan file")->required();
    st->add_option("--out", st_out);

    // train-tokenizer
    auto* tk = app.add_subcommand("train-tokenizer", "induce a WordPiece vocabulary");
    std::vector<std::string> tk_corpora;
    std::size_t tk_vocab_size = 30522;
    std::int64_t tk_min_pair = 2;
    bool tk_no_lowercase = false;
    std::string tk_out;
    tk->add_option("--corpus", tk_corpora, "text or captions file (repeatable)")->required();
    tk->add_option("--vocab-size", tk_vocab_size)->default_val(30522);
    tk->add_option("--min-pair-freq", tk_min_pair)->default_val(2)->check(CLI::PositiveNumber);
    tk->add_flag("--no-lowercase", tk_no_lowercase);
    tk->add_option("--out", tk_out)->required();

    // encode
    auto* en = app.add_subcommand("encode", "encode text with a trained vocabulary");
    std::string en_vocab, en_input, en_out;
    std::size_t en_max_len = 50;
    bool en_no_wrap = false, en_no_lowercase = false;
    en->add_option("--vocab", en_vocab)->required();
    en->add_option("--max-len", en_max_len)->default_val(50)->check(CLI::PositiveNumber);
    en->add_flag("--no-wrap", en_no_wrap);
    en->add_flag("--no-lowercase", en_no_lowercase);
    en->add_option("--input", en_input, "input file (default: stdin)");
    en->add_option("--out", en_out, "output file (default: stdout)");

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "run the whole pipeline from a config file");
    std::string pl_config, pl_out_dir;
    pl->add_option("--config", pl_config)->required();
    pl->add_option("--out-dir", pl_out_dir, "overrides out_dir from the config");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunLog log(app.get_subcommands().front()->get_name(), args);
    try {
        int code = 0;
        if (*tt) {
            code = cmd_train_tagger(global, log, tt_corpus, tt_epochs, tt_heldout, tt_out);
        } else if (*et) {
            code = cmd_eval_tagger(log, et_model, et_corpus);
        } else if (*sc) {
            code = cmd_score(global, log, sc_captions, sc_tagger, sc_noun_tags, sc_out);
        } else if (*qt) {
            code = cmd_quartiles(log, qt_scores, qt_phases, qt_out);
        } else if (*pd) {
            code = cmd_plot_distribution(log, pd_scores, pd_phases, pd_format, pd_out);
        } else if (*sd) {
            if (!sd_text.empty() && !sd_scores.empty())
                throw CLI::ValidationError("schedule", "--scores and --text are exclusive");
            if (sd_text.empty() && sd_scores.empty())
                throw CLI::RequiredError("--scores or --text");
            if (!sd_text.empty()) {
                const bool batch_given = sd->count("--batch-size") > 0;
                code = cmd_schedule_text(log, sd_text, sd_text_epochs,
                                         batch_given ? sd_batch : 256,
                                         global.resolve_seed(), sd_doc_sep, sd_out);
            } else {
                ScheduleConfig config;
                config.mode = sd_mode == "iid" ? ScheduleMode::Iid : ScheduleMode::Curriculum;
                config.ordering = sd_ordering == "descending" ? PhaseOrdering::Descending
                                                              : PhaseOrdering::Ascending;
                config.epochs_per_phase = sd_epp;
                config.iid_epochs = sd_iid_epochs;
                config.batch_size = sd->count("--batch-size") > 0 ? sd_batch : 32;
                config.seed = global.resolve_seed();
                config.holdout_fraction = sd_holdout;
                config.opaque_metadata = parse_metadata(sd_metadata);
                code = cmd_schedule_captions(global, log, sd_scores, sd_boundaries, config,
                                             sd_split_out, sd_out);
            }
        } else if (*cp) {
            code = cmd_compose(log, cp_text, cp_caption, cp_out);
        } else if (*st) {
            code = cmd_stats(log, st_manifest, st_out);
        } else if (*tk) {
            code = cmd_train_tokenizer(log, tk_corpora, tk_vocab_size, tk_min_pair,
                                       !tk_no_lowercase, tk_out);
        } else if (*en) {
            code = cmd_encode(log, en_vocab, en_max_len, !en_no_wrap, !en_no_lowercase,
                              en_input, en_out);
        } else if (*pl) {
            code = cmd_pipeline(global, log, pl_config, pl_out_dir);
        }
        log.emit();
        return code;
    } catch (const CLI::Error& e) {
        std::cerr << "currikit: " << e.what() << "\n";
        log.emit(e.what());
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "currikit: error: " << e.what() << "\n";
        log.emit(e.what());
        return 1;
    }
}

}  // namespace currikit
