#pragma once

#include <filesystem>
#include <iosfwd>

#include "slris/experiment.hpp"
#include "slris/train.hpp"

namespace slris {

/// End-to-end run: build + save a dataset, train + save the classifier,
/// evaluate it, then produce both sweep CSVs. Every stage seed is derived
/// from `seed`, so two runs with the same options produce byte-identical
/// files.
struct PipelineOptions {
    std::filesystem::path out_dir;
    std::size_t n_per_class = 10000;
    std::size_t window_len = 512;
    double snr_lo_db = 0.0;
    double snr_hi_db = 20.0;
    double split_ratio = 0.8;
    TrainConfig train;
    ExperimentConfig experiment;
    std::uint64_t seed = 1;
    bool perfect_classifier = false;
    std::ostream* log = nullptr;
};

struct PipelineArtifacts {
    std::filesystem::path dataset_path;
    std::filesystem::path model_path;
    std::filesystem::path report_path;
    std::filesystem::path theta_csv_path;
    std::filesystem::path k_csv_path;
    TrainReport report;
    EvalResult eval;
};

PipelineArtifacts run_all(const PipelineOptions& options);

/// Plain-text training report (also written by run_all next to the model).
void write_train_report(const TrainReport& report, const EvalResult& eval, std::ostream& os);

}  // namespace slris
