#include "currikit/curriculum.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "currikit/error.hpp"

namespace currikit {

std::int64_t DifficultyHistogram::cumulative_count(std::int64_t k) const {
    std::int64_t cum = 0;
    for (const auto& [difficulty, count] : counts) {
        if (difficulty > k) break;
        cum += count;
    }
    return cum;
}

DifficultyHistogram build_histogram(const std::vector<ScoredSample>& samples) {
    if (samples.empty()) throw ValidationError("cannot build a histogram from zero samples");
    DifficultyHistogram hist;
    for (const auto& sample : samples) {
        if (sample.difficulty < 0) throw ValidationError("negative difficulty in samples");
        ++hist.counts[sample.difficulty];
    }
    hist.total = static_cast<std::int64_t>(samples.size());
    return hist;
}

double cumulative_fraction(const DifficultyHistogram& hist, std::int64_t k) {
    if (hist.total == 0) throw ValidationError("empty histogram");
    return static_cast<double>(hist.cumulative_count(k)) / static_cast<double>(hist.total);
}

PhaseBoundaries phase_boundaries(const DifficultyHistogram& hist, int phases) {
    if (hist.total == 0 || hist.counts.empty()) throw ValidationError("empty histogram");
    if (phases < 1) throw ValidationError("phases must be positive");

    PhaseBoundaries out;
    out.phases = phases;
    out.boundaries.reserve(static_cast<std::size_t>(phases));

    // One ascending sweep; boundary p is the smallest difficulty whose
    // cumulative count reaches p/phases of the total. Integer comparison
    // cum * phases >= p * total avoids floating-point edge cases.
    std::int64_t cum = 0;
    int p = 1;
    for (const auto& [difficulty, count] : hist.counts) {
        cum += count;
        while (p <= phases && cum * phases >= static_cast<std::int64_t>(p) * hist.total) {
            out.boundaries.push_back(difficulty);
            ++p;
        }
    }
    // cum == total at the end, so every remaining p (only possible when
    // ratios tie exactly) has been emitted; the last boundary is the max.
    return out;
}

PhaseBoundaries quartile_boundaries(const DifficultyHistogram& hist) {
    return phase_boundaries(hist, 4);
}

std::vector<std::string> phase_pool(const std::vector<ScoredSample>& samples,
                                    const PhaseBoundaries& bounds, int p) {
    if (p < 1 || p > bounds.phases)
        throw ValidationError("phase index " + std::to_string(p) + " out of range 1.." +
                              std::to_string(bounds.phases));
    const std::int64_t threshold = bounds.boundaries[static_cast<std::size_t>(p - 1)];
    std::vector<std::string> ids;
    for (const auto& sample : samples)
        if (sample.difficulty <= threshold) ids.push_back(sample.sample_id);
    return ids;
}

void write_boundaries(const PhaseBoundaries& bounds, const DifficultyHistogram& hist,
                      const std::filesystem::path& path,
                      const std::string& scores_fingerprint) {
    nlohmann::ordered_json obj;
    obj["kind"] = "boundaries";
    obj["version"] = 1;
    obj["phases"] = bounds.phases;
    obj["boundaries"] = bounds.boundaries;
    nlohmann::ordered_json hist_obj = nlohmann::ordered_json::object();
    for (const auto& [difficulty, count] : hist.counts)
        hist_obj[std::to_string(difficulty)] = count;
    obj["histogram"] = hist_obj;
    obj["total"] = hist.total;
    obj["fingerprint"] = scores_fingerprint;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << obj.dump(2) << "\n";
}

PhaseBoundaries load_boundaries(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    nlohmann::json obj;
    try {
        in >> obj;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || obj.value("kind", "") != "boundaries")
        throw ValidationError(path.string() + ": not a boundaries file");

    PhaseBoundaries bounds;
    bounds.phases = obj.at("phases").get<int>();
    bounds.boundaries = obj.at("boundaries").get<std::vector<std::int64_t>>();
    if (bounds.phases < 1 ||
        bounds.boundaries.size() != static_cast<std::size_t>(bounds.phases))
        throw ValidationError(path.string() + ": phases/boundaries mismatch");
    if (!std::is_sorted(bounds.boundaries.begin(), bounds.boundaries.end()))
        throw ValidationError(path.string() + ": boundaries must be non-decreasing");
    return bounds;
}

namespace {

std::string format_fraction(double f) {
    std::ostringstream s;
    s << std::setprecision(17) << f;
    return s.str();
}

void write_distribution_csv(const DifficultyHistogram& hist, const PhaseBoundaries& bounds,
                            std::ofstream& out) {
    out << "difficulty,cumulative_count,cumulative_fraction,is_boundary\n";
    std::int64_t cum = 0;
    for (const auto& [difficulty, count] : hist.counts) {
        cum += count;
        const bool is_boundary = std::find(bounds.boundaries.begin(), bounds.boundaries.end(),
                                           difficulty) != bounds.boundaries.end();
        out << difficulty << ',' << cum << ','
            << format_fraction(static_cast<double>(cum) / static_cast<double>(hist.total))
            << ',' << (is_boundary ? 1 : 0) << "\n";
    }
}

// Minimal static rendering of the cumulative step curve with dashed
// boundary lines.
void write_distribution_svg(const DifficultyHistogram& hist, const PhaseBoundaries& bounds,
                            std::ofstream& out) {
    const int width = 640, height = 400, margin = 50;
    const std::int64_t max_d = hist.counts.rbegin()->first;
    const std::int64_t min_d = hist.counts.begin()->first;
    const double span = static_cast<double>(std::max<std::int64_t>(1, max_d - min_d));

    auto sx = [&](std::int64_t d) {
        return margin + (static_cast<double>(d - min_d) / span) * (width - 2 * margin);
    };
    auto sy = [&](double f) { return height - margin - f * (height - 2 * margin); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<!-- cumulative difficulty distribution with phase boundaries -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    std::int64_t cum = 0;
    double prev_f = 0.0;
    bool first = true;
    for (const auto& [difficulty, count] : hist.counts) {
        if (!first) out << sx(difficulty) << ',' << sy(prev_f) << ' ';
        cum += count;
        const double f = static_cast<double>(cum) / static_cast<double>(hist.total);
        out << sx(difficulty) << ',' << sy(f) << ' ';
        prev_f = f;
        first = false;
    }
    out << "\"/>\n";

    for (const auto b : bounds.boundaries) {
        out << "<line x1=\"" << sx(b) << "\" y1=\"" << margin << "\" x2=\"" << sx(b)
            << "\" y2=\"" << height - margin
            << "\" stroke=\"gray\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << sx(b) + 4 << "\" y=\"" << margin + 12
            << "\" font-size=\"11\">k=" << b << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void write_distribution(const DifficultyHistogram& hist, const PhaseBoundaries& bounds,
                        const std::filesystem::path& path, const std::string& format) {
    if (hist.counts.empty()) throw ValidationError("empty histogram");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    if (format == "csv")
        write_distribution_csv(hist, bounds, out);
    else if (format == "svg")
        write_distribution_svg(hist, bounds, out);
    else
        throw ValidationError("unknown distribution format: " + format);
}

}  // namespace currikit
