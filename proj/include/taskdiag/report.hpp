#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskdiag/distance.hpp"
#include "taskdiag/profiles.hpp"
#include "taskdiag/stream.hpp"
#include "taskdiag/taskify.hpp"

namespace taskdiag {

struct RunConfig {
    std::string input;                 // stream CSV or manifest JSON
    std::string channel;               // empty = all (single-channel streams)
    std::vector<std::size_t> windows;  // window lengths in days
    std::int64_t shift_days = 0;       // 0 = unshifted variants only
    PerturbationSpec perturbation{.delta_steps = 0, .n_samples = 64, .seed = 0};
    std::size_t delta_days = 1;        // converted per-series to delta_steps
    ProfileDistanceWeights weights;
    std::size_t l_min = kDefaultLMin;
    std::string timestamp_column = "id_time";
    std::string out_dir = "out";
    bool emit_svg = false;

    static RunConfig from_json_file(const std::string& path);
};

struct VariantResult {
    std::string label;
    std::size_t num_tasks = 0;
    BpsReport bps;
};

struct PairResult {
    std::string label_a, label_b;
    double d_prof = 0;
    double matrix_mse = 0;  // between upsampled pairwise matrices
};

struct SeriesResult {
    std::string series_id;
    bool ok = false;
    std::string error;  // set when !ok
    std::vector<VariantResult> variants;
    std::vector<PairResult> pairs;
};

struct AggregateStat {
    std::string name;
    double mean = 0, std = 0;
    std::size_t n = 0;
};

struct CorpusReport {
    std::string config_hash;
    std::string tool_version;
    std::vector<SeriesResult> series;
    std::vector<AggregateStat> aggregates;
};

/// Batch pipeline: per series and window variant, pairwise matrices,
/// profiles, BPS, pairwise profile distances, and the upsampled-matrix MSE
/// grid. Per-series failures are collected and the run continues.
CorpusReport run_diagnostics(const RunConfig& config);

/// Writes the corpus report JSON (deterministic bytes for identical inputs).
void write_corpus_report(const CorpusReport& report, const std::string& path);

/// Loads a corpus report and re-checks that the stored aggregates match a
/// recomputation from the per-series values.
CorpusReport load_corpus_report(const std::string& path);

/// Standalone SVG heatmap with a fixed linear color ramp and min/max
/// annotations; byte-deterministic for identical matrices.
void emit_heatmap(const DistanceMatrix& m, const std::string& path);

void write_matrix_csv(const DistanceMatrix& m, const std::string& path);

/// Three-row "Plasticity / Stability / BPS" text block, values printed as
/// "mean ± std" with 6 significant digits.
std::string format_bps_table(const BpsReport& r);

std::string taskification_to_json(const Taskification& tk, std::size_t steps_per_day);
Taskification taskification_from_json(const std::string& text);

std::string bps_report_to_json(const BpsReport& r);

std::string tool_version();

}  // namespace taskdiag
