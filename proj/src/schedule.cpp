#include "currikit/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "currikit/error.hpp"
#include "currikit/hash.hpp"
#include "currikit/rng.hpp"

namespace currikit {

namespace {

const char* mode_name(ScheduleMode mode) {
    return mode == ScheduleMode::Curriculum ? "curriculum" : "iid";
}

const char* ordering_name(PhaseOrdering ordering) {
    return ordering == PhaseOrdering::Ascending ? "ascending" : "descending";
}

nlohmann::ordered_json config_to_json(const ScheduleConfig& config) {
    nlohmann::ordered_json obj;
    obj["mode"] = mode_name(config.mode);
    obj["ordering"] = ordering_name(config.ordering);
    obj["phases"] = config.phases;
    obj["epochs_per_phase"] = config.epochs_per_phase;
    obj["iid_epochs"] = config.iid_epochs;
    obj["batch_size"] = config.batch_size;
    obj["seed"] = config.seed;
    obj["holdout_fraction"] = config.holdout_fraction;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config.opaque_metadata) meta[key] = value;
    obj["opaque_metadata"] = meta;
    return obj;
}

ScheduleConfig config_from_json(const nlohmann::json& obj) {
    ScheduleConfig config;
    const std::string mode = obj.value("mode", "curriculum");
    config.mode = mode == "iid" ? ScheduleMode::Iid : ScheduleMode::Curriculum;
    const std::string ordering = obj.value("ordering", "ascending");
    config.ordering =
        ordering == "descending" ? PhaseOrdering::Descending : PhaseOrdering::Ascending;
    config.phases = obj.value("phases", 4);
    config.epochs_per_phase = obj.value("epochs_per_phase", 2);
    config.iid_epochs = obj.value("iid_epochs", 8);
    config.batch_size = obj.value("batch_size", 32);
    config.seed = obj.value("seed", std::uint64_t{0});
    config.holdout_fraction = obj.value("holdout_fraction", 0.05);
    if (obj.contains("opaque_metadata"))
        for (const auto& [key, value] : obj.at("opaque_metadata").items())
            config.opaque_metadata[key] = value.get<std::string>();
    return config;
}

void append_epoch_batches(std::vector<BatchEntry>& entries,
                          const std::vector<std::string>& pool, int phase, int epoch,
                          int batch_size, std::uint64_t seed) {
    std::vector<std::string> ids = pool;
    Xoshiro256StarStar rng(stream_seed(seed, static_cast<std::uint64_t>(phase),
                                       static_cast<std::uint64_t>(epoch)));
    fisher_yates_shuffle(ids, rng);

    int batch_index = 0;
    for (std::size_t start = 0; start < ids.size(); start += static_cast<std::size_t>(batch_size)) {
        BatchEntry entry;
        entry.phase = phase;
        entry.epoch = epoch;
        entry.batch_index = batch_index++;
        const std::size_t end = std::min(ids.size(), start + static_cast<std::size_t>(batch_size));
        entry.sample_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(start),
                                ids.begin() + static_cast<std::ptrdiff_t>(end));
        entries.push_back(std::move(entry));
    }
}

std::string ids_fingerprint(const std::vector<std::string>& ids) {
    Fnv1a64 h;
    for (const auto& id : ids) {
        h.update(id);
        h.update("\n");
    }
    return to_hex(h.digest());
}

std::string samples_fingerprint(const std::vector<ScoredSample>& samples) {
    Fnv1a64 h;
    for (const auto& sample : samples) {
        h.update(sample.sample_id);
        h.update("\t");
        h.update_u64(static_cast<std::uint64_t>(sample.difficulty));
        h.update("\n");
    }
    return to_hex(h.digest());
}

}  // namespace

std::optional<std::string> ScheduleConfig::budget_warning() const {
    if (phases * epochs_per_phase == iid_epochs) return std::nullopt;
    std::ostringstream s;
    s << "unequal pass budget: phases*epochs_per_phase = " << phases * epochs_per_phase
      << " but iid_epochs = " << iid_epochs;
    return s.str();
}

SplitAssignment holdout_split(const std::vector<std::string>& ids, double fraction,
                              std::uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw ValidationError("holdout fraction must be in [0,1)");

    const std::size_t n = ids.size();
    const auto validation_count = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(n) + 0.5));  // round half up

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Xoshiro256StarStar rng(stream_seed(seed, 0, 0));
    fisher_yates_shuffle(order, rng);

    std::vector<bool> in_validation(n, false);
    for (std::size_t i = 0; i < validation_count; ++i) in_validation[order[i]] = true;

    SplitAssignment split;
    split.train_ids.reserve(n - validation_count);
    split.validation_ids.reserve(validation_count);
    for (std::size_t i = 0; i < n; ++i) {
        if (in_validation[i])
            split.validation_ids.push_back(ids[i]);
        else
            split.train_ids.push_back(ids[i]);
    }
    return split;
}

BatchManifest build_curriculum_schedule(const std::vector<ScoredSample>& samples,
                                        const PhaseBoundaries& bounds,
                                        const ScheduleConfig& config) {
    if (config.mode != ScheduleMode::Curriculum)
        throw ValidationError("config mode must be curriculum");
    if (config.batch_size < 1) throw ValidationError("batch_size must be positive");
    if (config.epochs_per_phase < 1) throw ValidationError("epochs_per_phase must be positive");
    if (bounds.phases != config.phases)
        throw ValidationError("boundaries have " + std::to_string(bounds.phases) +
                              " phases but config expects " + std::to_string(config.phases));

    std::vector<std::vector<std::string>> pools;
    pools.reserve(static_cast<std::size_t>(bounds.phases));
    for (int p = 1; p <= bounds.phases; ++p) pools.push_back(phase_pool(samples, bounds, p));
    if (pools.front().empty())
        throw ValidationError("first phase empty: boundaries do not match the samples");

    BatchManifest manifest;
    manifest.config = config;
    manifest.fingerprint = samples_fingerprint(samples);

    // Manifest phase numbers always run 1..phases in training order; under
    // descending ordering phase 1 draws from the largest pool.
    for (int position = 1; position <= config.phases; ++position) {
        const std::size_t pool_index =
            config.ordering == PhaseOrdering::Ascending
                ? static_cast<std::size_t>(position - 1)
                : static_cast<std::size_t>(config.phases - position);
        for (int epoch = 1; epoch <= config.epochs_per_phase; ++epoch)
            append_epoch_batches(manifest.entries, pools[pool_index], position, epoch,
                                 config.batch_size, config.seed);
    }
    return manifest;
}

BatchManifest build_iid_schedule(const std::vector<std::string>& ids,
                                 const ScheduleConfig& config) {
    if (config.mode != ScheduleMode::Iid) throw ValidationError("config mode must be iid");
    if (ids.empty()) throw ValidationError("cannot schedule zero ids");
    if (config.batch_size < 1) throw ValidationError("batch_size must be positive");
    if (config.iid_epochs < 1) throw ValidationError("iid_epochs must be positive");

    BatchManifest manifest;
    manifest.config = config;
    manifest.fingerprint = ids_fingerprint(ids);
    for (int epoch = 1; epoch <= config.iid_epochs; ++epoch)
        append_epoch_batches(manifest.entries, ids, /*phase=*/0, epoch, config.batch_size,
                             config.seed);
    return manifest;
}

BatchManifest build_text_pretrain_schedule(const std::vector<std::string>& doc_ids,
                                           int epochs, int batch_size, std::uint64_t seed) {
    ScheduleConfig config;
    config.mode = ScheduleMode::Iid;
    config.iid_epochs = epochs;
    config.batch_size = batch_size;
    config.seed = seed;
    config.holdout_fraction = 0.0;
    return build_iid_schedule(doc_ids, config);
}

void write_manifest(const BatchManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());

    nlohmann::ordered_json header;
    header["kind"] = "manifest";
    header["version"] = 1;
    header["config"] = config_to_json(manifest.config);
    header["fingerprint"] = manifest.fingerprint;
    out << header.dump() << "\n";

    for (const auto& entry : manifest.entries) {
        nlohmann::ordered_json obj;
        obj["phase"] = entry.phase;
        obj["epoch"] = entry.epoch;
        obj["batch"] = entry.batch_index;
        obj["samples"] = entry.sample_ids;
        out << obj.dump() << "\n";
    }
}

BatchManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());

    BatchManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": malformed JSON: " + e.what());
        }
        if (!have_header) {
            if (!obj.is_object() || obj.value("kind", "") != "manifest")
                throw ValidationError(path.string() + ": first line is not a manifest header");
            manifest.config = config_from_json(obj.at("config"));
            manifest.fingerprint = obj.value("fingerprint", "");
            have_header = true;
            continue;
        }
        BatchEntry entry;
        entry.phase = obj.at("phase").get<int>();
        entry.epoch = obj.at("epoch").get<int>();
        entry.batch_index = obj.at("batch").get<int>();
        entry.sample_ids = obj.at("samples").get<std::vector<std::string>>();
        manifest.entries.push_back(std::move(entry));
    }
    if (!have_header) throw ValidationError(path.string() + ": empty manifest");
    return manifest;
}

TrainingPlan compose_t_plus_c(const std::optional<std::filesystem::path>& text_manifest,
                              const std::filesystem::path& caption_manifest) {
    TrainingPlan plan;
    if (text_manifest)
        plan.stages.push_back(
            PlanStage{"text", text_manifest->string(), fingerprint_file(text_manifest->string())});
    plan.stages.push_back(PlanStage{"caption", caption_manifest.string(),
                                    fingerprint_file(caption_manifest.string())});
    return plan;
}

void write_plan(const TrainingPlan& plan, const std::filesystem::path& path) {
    nlohmann::ordered_json obj;
    obj["kind"] = "plan";
    obj["version"] = 1;
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const auto& stage : plan.stages) {
        nlohmann::ordered_json s;
        s["name"] = stage.name;
        s["manifest"] = stage.manifest_path;
        s["fingerprint"] = stage.fingerprint;
        stages.push_back(s);
    }
    obj["stages"] = stages;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << obj.dump(2) << "\n";
}

TrainingPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    nlohmann::json obj;
    try {
        in >> obj;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || obj.value("kind", "") != "plan")
        throw ValidationError(path.string() + ": not a plan file");

    TrainingPlan plan;
    for (const auto& s : obj.at("stages")) {
        PlanStage stage;
        stage.name = s.at("name").get<std::string>();
        stage.manifest_path = s.at("manifest").get<std::string>();
        stage.fingerprint = s.value("fingerprint", "");
        plan.stages.push_back(std::move(stage));
    }
    if (plan.stages.empty()) throw ValidationError(path.string() + ": plan has no stages");
    return plan;
}

std::vector<std::pair<PlanStage, BatchManifest>> load_plan_manifests(
    const std::filesystem::path& plan_path) {
    const TrainingPlan plan = load_plan(plan_path);
    const std::filesystem::path base = plan_path.parent_path();

    std::vector<std::pair<PlanStage, BatchManifest>> out;
    for (const auto& stage : plan.stages) {
        std::filesystem::path manifest_path(stage.manifest_path);
        if (manifest_path.is_relative()) manifest_path = base / manifest_path;
        if (!stage.fingerprint.empty()) {
            const std::string actual = fingerprint_file(manifest_path.string());
            if (actual != stage.fingerprint)
                throw ValidationError("stage \"" + stage.name + "\": manifest " +
                                      manifest_path.string() + " fingerprint " + actual +
                                      " does not match plan (" + stage.fingerprint + ")");
        }
        out.emplace_back(stage, load_manifest(manifest_path));
    }
    return out;
}

StageStats schedule_stats(const BatchManifest& manifest, const std::string& name) {
    StageStats stats;
    stats.name = name;

    std::set<std::pair<int, int>> epochs_seen;
    std::map<int, std::set<std::string>> phase_ids;
    std::map<int, std::set<int>> phase_epochs;
    std::map<std::pair<int, int>, std::size_t> batches_per_epoch;
    std::set<std::string> all_ids;

    for (const auto& entry : manifest.entries) {
        epochs_seen.insert({entry.phase, entry.epoch});
        phase_epochs[entry.phase].insert(entry.epoch);
        ++batches_per_epoch[{entry.phase, entry.epoch}];
        stats.total_samples_processed += entry.sample_ids.size();
        ++stats.total_batches;
        for (const auto& id : entry.sample_ids) {
            phase_ids[entry.phase].insert(id);
            all_ids.insert(id);
        }
    }

    for (const auto& [phase, ids] : phase_ids) {
        PhaseStats ps;
        ps.phase = phase;
        ps.pool_size = ids.size();
        ps.epochs = static_cast<int>(phase_epochs[phase].size());
        // batch count is identical across a phase's epochs (same pool)
        ps.batches_per_epoch = batches_per_epoch[{phase, *phase_epochs[phase].begin()}];
        stats.phases.push_back(ps);
    }

    stats.distinct_ids = all_ids.size();
    stats.epoch_count = epochs_seen.size();
    const std::size_t iid_equivalent = stats.epoch_count * stats.distinct_ids;
    stats.cost_ratio = iid_equivalent == 0
                           ? 0.0
                           : static_cast<double>(stats.total_samples_processed) /
                                 static_cast<double>(iid_equivalent);
    return stats;
}

std::string stage_stats_json(const StageStats& stats, int indent) {
    nlohmann::ordered_json obj;
    obj["name"] = stats.name;
    nlohmann::ordered_json phases = nlohmann::ordered_json::array();
    for (const auto& ps : stats.phases) {
        nlohmann::ordered_json p;
        p["phase"] = ps.phase;
        p["pool_size"] = ps.pool_size;
        p["epochs"] = ps.epochs;
        p["batches_per_epoch"] = ps.batches_per_epoch;
        phases.push_back(p);
    }
    obj["phases"] = phases;
    obj["total_batches"] = stats.total_batches;
    obj["total_samples_processed"] = stats.total_samples_processed;
    obj["distinct_ids"] = stats.distinct_ids;
    obj["epoch_count"] = stats.epoch_count;
    obj["iid_equivalent_samples"] = stats.epoch_count * stats.distinct_ids;
    obj["cost_ratio"] = stats.cost_ratio;
    return obj.dump(indent);
}

}  // namespace currikit
