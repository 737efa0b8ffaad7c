#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "falsimeter/classify.hpp"
#include "falsimeter/lingua.hpp"

namespace falsimeter::commands {

inline constexpr std::string_view kToolName = "falsimeter";
inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFatal = 1;
inline constexpr int kPartial = 2;

struct RunConfig {
    std::filesystem::path corpus_path;
    std::filesystem::path tagged_dir;
    std::filesystem::path cleaning_rules_path;
    std::filesystem::path output_dir = ".";
    /// Input of stats/classify/report; defaults to <output_dir>/scores.csv.
    std::filesystem::path scores_path;
    /// Grid files written by classify, rendered by report.
    std::filesystem::path grids_dir;

    lingua::TagSet noun_tags = lingua::default_noun_tags();
    lingua::TagSet pos_tags = lingua::default_pos_tags();
    int folds = 5;
    std::uint64_t seed = 42;
    std::size_t grid_cols = 200;
    std::size_t grid_rows = 200;
    std::set<std::string> report_formats = {"csv", "json", "svg"};
    std::vector<classify::ModelKind> models{classify::kAllModels.begin(), classify::kAllModels.end()};
    /// Category filter for the per-category report figure; unset = all.
    std::optional<std::set<std::string>> categories;

    bool wants(std::string_view format) const { return report_formats.contains(std::string(format)); }
    std::filesystem::path scores_file() const {
        return scores_path.empty() ? output_dir / "scores.csv" : scores_path;
    }
};

struct SynthSpec {
    std::size_t n_cases = 50;
    std::size_t nouns_per_story = 20;
    double planted_concealment = 0.4;
    double planted_overstatement = 0.25;
    /// Rates for the real article; default to the planted ones.
    std::optional<double> real_concealment;
    std::optional<double> real_overstatement;
    double noise_std = 0.0;
    std::vector<std::string> categories = {"politics", "science", "civics"};
    std::uint64_t seed = 42;
};

/// Hash of the settings that affect output content (paths excluded).
std::string config_hash(const RunConfig& config, std::string_view extra = {});

/// "falsimeter <version> seed=<seed> config=<hash>"
std::string header_line(const RunConfig& config, std::string_view extra = {});

/// Seed from FALSIMETER_SEED when set and valid, else `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 42);

/// Parses "200x200".
std::pair<std::size_t, std::size_t> parse_resolution(std::string_view s);

// Each command reports problems on `err` and returns an exit code:
// kOk, kFatal (unreadable or invalid input), or kPartial (some cases skipped).

/// Writes scores.csv, corpus_stats.csv, document_stats.csv and
/// measure_summary.json.
int cmd_measure(const RunConfig& config, std::ostream& err);

/// Writes stats.json (and stats_fits.csv when csv is requested).
int cmd_stats(const RunConfig& config, std::ostream& err);

/// Writes cv_report.csv, grid_<model>.txt and, with svg, boundary_<model>.svg.
int cmd_classify(const RunConfig& config, std::ostream& err);

/// Writes posdiff.csv and posdiff_totals.csv.
int cmd_posdiff(const RunConfig& config, std::ostream& err);

/// Writes corpus.jsonl and synth_manifest.json.
int cmd_synth(const SynthSpec& spec, const RunConfig& config, std::ostream& err);

/// Writes scatter.svg, categories.svg, ellipses.svg and one
/// boundary_<model>.svg per grid in grids_dir.
int cmd_report(const RunConfig& config, std::ostream& err);

/// Generated corpus without touching the filesystem.
struct SynthResult {
    std::vector<corpus::CaseRecord> records;
    std::string manifest_json;
};
SynthResult synthesize(const SynthSpec& spec, std::string_view header = {});

}  // namespace falsimeter::commands
