#pragma once

// Difficulty histogram, cumulative distribution, and the phase boundaries
// that drive pacing. Boundaries are inclusive integer thresholds: phase p
// holds every sample with difficulty <= b_p, so pools are nested and ties at
// a boundary all land in the earlier phase.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "currikit/scorer.hpp"

namespace currikit {

struct DifficultyHistogram {
    std::map<std::int64_t, std::int64_t> counts;  // difficulty -> positive count
    std::int64_t total = 0;

    // Count of samples with difficulty <= k.
    std::int64_t cumulative_count(std::int64_t k) const;
};

struct PhaseBoundaries {
    int phases = 4;
    std::vector<std::int64_t> boundaries;  // one inclusive threshold per phase
};

DifficultyHistogram build_histogram(const std::vector<ScoredSample>& samples);

// F(k) = P(difficulty <= k); non-decreasing, F(max) = 1.
double cumulative_fraction(const DifficultyHistogram& hist, std::int64_t k);

// b_p = smallest k with F(k) >= p/phases, computed in exact integer
// arithmetic. phases = 4 gives the quartile boundaries.
PhaseBoundaries phase_boundaries(const DifficultyHistogram& hist, int phases);
PhaseBoundaries quartile_boundaries(const DifficultyHistogram& hist);

// Ids of samples with difficulty <= b_p, in input order. p is 1-based.
std::vector<std::string> phase_pool(const std::vector<ScoredSample>& samples,
                                    const PhaseBoundaries& bounds, int p);

void write_boundaries(const PhaseBoundaries& bounds, const DifficultyHistogram& hist,
                      const std::filesystem::path& path,
                      const std::string& scores_fingerprint);
PhaseBoundaries load_boundaries(const std::filesystem::path& path);

// (difficulty, cumulative count, F, boundary flag) rows for the step-curve
// plot; `format` is "csv" or "svg".
void write_distribution(const DifficultyHistogram& hist, const PhaseBoundaries& bounds,
                        const std::filesystem::path& path, const std::string& format);

}  // namespace currikit
