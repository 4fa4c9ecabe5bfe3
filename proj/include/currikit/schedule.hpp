#pragma once

// Materialized batch schedules. Every epoch is one seeded Fisher-Yates
// permutation of its pool, chunked into batches; the short final batch is
// kept. Epoch streams derive from stream_seed(seed, phase, epoch) so
// distinct (phase, epoch) pairs are independent and reproducible bit for
// bit; stream (0,0) is reserved for the holdout split.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "currikit/curriculum.hpp"
#include "currikit/scorer.hpp"

namespace currikit {

enum class ScheduleMode { Curriculum, Iid };
enum class PhaseOrdering { Ascending, Descending };

struct ScheduleConfig {
    ScheduleMode mode = ScheduleMode::Curriculum;
    PhaseOrdering ordering = PhaseOrdering::Ascending;
    int phases = 4;
    int epochs_per_phase = 2;
    int iid_epochs = 8;
    int batch_size = 32;  // 256 for text pretraining
    std::uint64_t seed = 0;
    double holdout_fraction = 0.05;
    // Carried into headers verbatim, never interpreted (learning rate,
    // optimizer notes, token length caps and the like).
    std::map<std::string, std::string> opaque_metadata;

    // Curriculum and i.i.d. regimes compare at equal pass budget only when
    // phases * epochs_per_phase == iid_epochs; returns a warning when not.
    std::optional<std::string> budget_warning() const;
};

struct BatchEntry {
    int phase = 0;  // 0 for i.i.d. schedules
    int epoch = 0;  // 1-based within a phase
    int batch_index = 0;
    std::vector<std::string> sample_ids;
};

struct BatchManifest {
    ScheduleConfig config;
    std::string fingerprint;  // hex64 of the scheduled corpus
    std::vector<BatchEntry> entries;
};

struct SplitAssignment {
    std::vector<std::string> train_ids;
    std::vector<std::string> validation_ids;
};

// Seeded shuffle; the first round(fraction * N) ids (round half up) become
// validation; relative input order is restored within each side.
SplitAssignment holdout_split(const std::vector<std::string>& ids, double fraction,
                              std::uint64_t seed);

BatchManifest build_curriculum_schedule(const std::vector<ScoredSample>& samples,
                                        const PhaseBoundaries& bounds,
                                        const ScheduleConfig& config);

BatchManifest build_iid_schedule(const std::vector<std::string>& ids,
                                 const ScheduleConfig& config);

BatchManifest build_text_pretrain_schedule(const std::vector<std::string>& doc_ids,
                                           int epochs, int batch_size, std::uint64_t seed);

void write_manifest(const BatchManifest& manifest, const std::filesystem::path& path);
BatchManifest load_manifest(const std::filesystem::path& path);

// Two-stage T+C plan (or a single-stage C plan when `text_manifest` is
// absent). Stage order is fixed: text always precedes caption. Paths are
// stored as given and resolved against the plan file's directory.
struct PlanStage {
    std::string name;  // "text" or "caption"
    std::string manifest_path;
    std::string fingerprint;  // hex64 of the manifest file bytes
};

struct TrainingPlan {
    std::vector<PlanStage> stages;
};

TrainingPlan compose_t_plus_c(const std::optional<std::filesystem::path>& text_manifest,
                              const std::filesystem::path& caption_manifest);

void write_plan(const TrainingPlan& plan, const std::filesystem::path& path);
TrainingPlan load_plan(const std::filesystem::path& path);

// Loads every stage manifest, checking fingerprints against the plan.
std::vector<std::pair<PlanStage, BatchManifest>> load_plan_manifests(
    const std::filesystem::path& plan_path);

struct PhaseStats {
    int phase = 0;
    std::size_t pool_size = 0;
    int epochs = 0;
    std::size_t batches_per_epoch = 0;
};

struct StageStats {
    std::string name;
    std::vector<PhaseStats> phases;
    std::size_t total_batches = 0;
    std::size_t total_samples_processed = 0;
    std::size_t distinct_ids = 0;
    std::size_t epoch_count = 0;
    // processed / (epoch_count * distinct_ids): 1.0 for i.i.d. schedules,
    // < 1 whenever earlier pools are smaller than the full set.
    double cost_ratio = 0.0;
};

StageStats schedule_stats(const BatchManifest& manifest, const std::string& name = "manifest");

// JSON rendering used by the stats subcommand and pipeline report.
std::string stage_stats_json(const StageStats& stats, int indent = -1);

}  // namespace currikit
