#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slris/controller.hpp"
#include "slris/dataset.hpp"
#include "slris/model.hpp"

namespace slris {

enum class Scheme { Proposed, AlwaysOn, AlwaysOff };

const char* to_string(Scheme scheme);

/// What stands in for the spectrum classifier during a sweep: the trained
/// model, a ground-truth oracle, or the oracle with labels corrupted at a
/// fixed rate (for sensitivity studies). Corruption draws are derived from
/// the realization stream independently of the rate, so runs at different
/// rates corrupt nested subsets of the same realizations.
enum class ClassifierMode { Model, Perfect, Corrupted };

struct ClassifierRef {
    ClassifierMode mode = ClassifierMode::Perfect;
    const CnnModel* model = nullptr;  // required in Model mode
    double corruption_rate = 0.0;     // used in Corrupted mode
};

struct ExperimentConfig {
    ScenarioParams scenario;

    // sweep-theta grid (degrees); scenario.ris_count is held fixed
    double theta_min_deg = 10.0;
    double theta_max_deg = 150.0;
    double theta_step_deg = 10.0;

    // sweep-k grid; theta is drawn per realization from the range below
    std::size_t k_min = 1;
    std::size_t k_max = 10;
    double theta_draw_lo_deg = 30.0;
    double theta_draw_hi_deg = 120.0;

    // window synthesis for model-backed classification
    std::size_t window_len = 512;
    double window_snr_lo_db = 0.0;
    double window_snr_hi_db = 20.0;
    SignalClass true_class = SignalClass::Both;

    std::size_t realizations = 10000;
    std::vector<Scheme> schemes{Scheme::Proposed, Scheme::AlwaysOn, Scheme::AlwaysOff};
    std::uint64_t seed = 1;
    std::string classifier_path;
    std::string output_path;
    unsigned threads = 0;

    void validate() const;
};

/// One Monte Carlo draw: classify (per the classifier mode), run the
/// controller on the inferred occupancy, then score every scheme under the
/// TRUE occupancy.
struct RealizationResult {
    SignalClass inferred = SignalClass::Both;
    bool inference_correct = true;
    double proposed_sinr_db = 0.0;
    double always_on_sinr_db = 0.0;
    double always_off_sinr_db = 0.0;

    double scheme_sinr_db(Scheme scheme) const;
};

RealizationResult run_realization(const ExperimentConfig& config,
                                  const ClassifierRef& classifier, double theta_deg,
                                  std::size_t ris_count, Rng& rng);

/// One output row per (sweep value, scheme).
struct SweepRow {
    double sweep_value = 0.0;
    Scheme scheme = Scheme::Proposed;
    double mean_sinr_db = 0.0;
    std::size_t realizations = 0;
    double cls_accuracy = 0.0;
};

/// Mean SINR per scheme across the theta grid at fixed ris_count.
std::vector<SweepRow> sweep_theta(const ExperimentConfig& config,
                                  const ClassifierRef& classifier);

/// Mean SINR per scheme across ris_count = k_min..k_max with theta drawn
/// uniformly per realization.
std::vector<SweepRow> sweep_k(const ExperimentConfig& config, const ClassifierRef& classifier);

/// CSV: header `sweep_var,scheme,mean_sinr_db,n,cls_accuracy`, floats with
/// 6 significant digits.
void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

struct EvalResult {
    std::array<std::array<std::uint64_t, 4>, 4> confusion{};  // [true][predicted]
    std::array<double, 4> per_class_accuracy{};
    double overall_accuracy = 0.0;
    std::size_t count = 0;
};

/// Confusion matrix and accuracies of the model on a labeled set.
EvalResult eval_classifier(const CnnModel& model, const LabeledDataset& test,
                           unsigned threads = 0);

/// Same tally with an arbitrary predictor (used to test the harness itself).
EvalResult eval_with(const LabeledDataset& test,
                     const std::function<SignalClass(const IqWindow&)>& infer);

}  // namespace slris
