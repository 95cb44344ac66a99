#include "slris/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "slris/nn_ops.hpp"
#include "slris/parallel.hpp"

namespace slris {

// Defined below; run_cell reuses per-chunk forward buffers through it.
RealizationResult run_realization_impl(const ExperimentConfig& config,
                                       const ClassifierRef& classifier, double theta_deg,
                                       std::size_t ris_count, Rng& rng,
                                       ForwardBuffers* buffers);

namespace {

// Realizations are processed in this many chunks with per-chunk partial sums
// reduced in chunk order, so sweep output is independent of the thread count.
constexpr std::size_t kSweepChunks = 64;

SignalClass classify_window(const CnnModel& model, const IqWindow& window,
                            ForwardBuffers& buffers) {
    window_to_input(window, buffers.input.data());
    forward(model, buffers);
    return static_cast<SignalClass>(argmax_class(buffers.logits));
}

SignalClass infer_occupancy(const ExperimentConfig& config, const ClassifierRef& classifier,
                            SignalClass truth, Rng& rng, ForwardBuffers* buffers) {
    switch (classifier.mode) {
        case ClassifierMode::Perfect:
            return truth;
        case ClassifierMode::Corrupted: {
            // Both draws happen regardless of the rate so that runs at
            // different rates see identical (u, substitute) pairs.
            const double u = rng.uniform();
            const auto substitute = static_cast<SignalClass>(
                (static_cast<std::size_t>(truth) + 1 + rng.uniform_index(3)) % 4);
            return u < classifier.corruption_rate ? substitute : truth;
        }
        case ClassifierMode::Model: {
            if (classifier.model == nullptr)
                throw std::invalid_argument("run_realization: classifier model not set");
            const double snr_db = rng.uniform(config.window_snr_lo_db, config.window_snr_hi_db);
            const IqWindow window = make_window(truth, config.window_len, snr_db,
                                                desired_signature(), interferer_signature(), rng);
            if (window.length() != classifier.model->shape.window_len)
                throw std::invalid_argument(
                    "run_realization: window length does not match the classifier");
            return classify_window(*classifier.model, window, *buffers);
        }
    }
    throw std::logic_error("unreachable");
}

struct CellStats {
    double proposed_sum = 0.0;
    double always_on_sum = 0.0;
    double always_off_sum = 0.0;
    std::size_t correct = 0;
};

// Mean SINR per scheme over `realizations` draws at one sweep cell. Every
// cell of a sweep shares the same realization streams (common random
// numbers), which makes cross-cell comparisons exact: an all-OFF mean is
// bit-identical in every K cell, and per-realization monotonicity carries
// over to the means.
CellStats run_cell(const ExperimentConfig& config, const ClassifierRef& classifier,
                   double cell_theta_deg, bool draw_theta, std::size_t ris_count,
                   ParallelRunner& runner) {
    const Rng cell_rng = Rng(config.seed).split(0);
    const std::size_t n = config.realizations;
    const std::size_t chunks = std::min(kSweepChunks, n);

    std::vector<CellStats> partial(chunks);
    runner.run(chunks, [&](std::size_t c) {
        std::optional<ForwardBuffers> buffers;
        if (classifier.model != nullptr) buffers.emplace(classifier.model->shape);
        const std::size_t begin = c * n / chunks;
        const std::size_t end = (c + 1) * n / chunks;
        CellStats& acc = partial[c];
        for (std::size_t r = begin; r < end; ++r) {
            Rng rng = cell_rng.split(r);
            const double theta =
                draw_theta ? rng.uniform(config.theta_draw_lo_deg, config.theta_draw_hi_deg)
                           : cell_theta_deg;
            RealizationResult result = run_realization_impl(
                config, classifier, theta, ris_count, rng, buffers ? &*buffers : nullptr);
            acc.proposed_sum += result.proposed_sinr_db;
            acc.always_on_sum += result.always_on_sinr_db;
            acc.always_off_sum += result.always_off_sinr_db;
            if (result.inference_correct) acc.correct++;
        }
    });

    CellStats total;
    for (const CellStats& p : partial) {
        total.proposed_sum += p.proposed_sum;
        total.always_on_sum += p.always_on_sum;
        total.always_off_sum += p.always_off_sum;
        total.correct += p.correct;
    }
    return total;
}

std::vector<SweepRow> rows_for_cell(const ExperimentConfig& config, double sweep_value,
                                    const CellStats& stats) {
    const double n = static_cast<double>(config.realizations);
    std::vector<SweepRow> rows;
    for (Scheme scheme : config.schemes) {
        SweepRow row;
        row.sweep_value = sweep_value;
        row.scheme = scheme;
        row.realizations = config.realizations;
        row.cls_accuracy = static_cast<double>(stats.correct) / n;
        switch (scheme) {
            case Scheme::Proposed: row.mean_sinr_db = stats.proposed_sum / n; break;
            case Scheme::AlwaysOn: row.mean_sinr_db = stats.always_on_sum / n; break;
            case Scheme::AlwaysOff: row.mean_sinr_db = stats.always_off_sum / n; break;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

RealizationResult run_realization_impl(const ExperimentConfig& config,
                                       const ClassifierRef& classifier, double theta_deg,
                                       std::size_t ris_count, Rng& rng,
                                       ForwardBuffers* buffers) {
    ScenarioParams scenario = config.scenario;
    scenario.theta_deg = theta_deg;
    scenario.ris_count = ris_count;
    const Layout layout = make_layout(scenario);

    const SignalClass truth = config.true_class;

    RealizationResult result;
    result.inferred = infer_occupancy(config, classifier, truth, rng, buffers);
    result.inference_correct = result.inferred == truth;

    std::array<double, 4> posterior{};
    posterior[static_cast<std::size_t>(result.inferred)] = 1.0;
    const Decision decision = decide(posterior, scenario, layout);

    const Occupancy truth_occupancy = occupancy_of(truth);
    result.proposed_sinr_db = sinr(scenario, layout, decision.states, truth_occupancy).sinr_db;
    result.always_on_sinr_db =
        sinr(scenario, layout, RisStateVector::all_on(ris_count), truth_occupancy).sinr_db;
    result.always_off_sinr_db =
        sinr(scenario, layout, RisStateVector::all_off(ris_count), truth_occupancy).sinr_db;
    return result;
}

void ExperimentConfig::validate() const {
    if (realizations < 1) throw std::invalid_argument("experiment: realizations must be >= 1");
    if (schemes.empty()) throw std::invalid_argument("experiment: no schemes selected");
    if (!(theta_step_deg > 0.0))
        throw std::invalid_argument("experiment: theta_step must be > 0");
    if (theta_min_deg > theta_max_deg)
        throw std::invalid_argument("experiment: empty theta grid");
    if (k_min < 1 || k_min > k_max) throw std::invalid_argument("experiment: empty K grid");
    if (!valid_window_length(window_len))
        throw std::invalid_argument("experiment: unsupported window length");
    if (!(window_snr_lo_db <= window_snr_hi_db))
        throw std::invalid_argument("experiment: invalid window SNR range");
    if (!(theta_draw_lo_deg <= theta_draw_hi_deg))
        throw std::invalid_argument("experiment: invalid theta draw range");
}

double RealizationResult::scheme_sinr_db(Scheme scheme) const {
    switch (scheme) {
        case Scheme::Proposed: return proposed_sinr_db;
        case Scheme::AlwaysOn: return always_on_sinr_db;
        case Scheme::AlwaysOff: return always_off_sinr_db;
    }
    throw std::logic_error("unreachable");
}

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Proposed: return "Proposed";
        case Scheme::AlwaysOn: return "AlwaysOn";
        case Scheme::AlwaysOff: return "AlwaysOff";
    }
    return "?";
}

RealizationResult run_realization(const ExperimentConfig& config,
                                  const ClassifierRef& classifier, double theta_deg,
                                  std::size_t ris_count, Rng& rng) {
    if (classifier.mode == ClassifierMode::Model) {
        if (classifier.model == nullptr)
            throw std::invalid_argument("run_realization: classifier model not set");
        ForwardBuffers buffers(classifier.model->shape);
        return run_realization_impl(config, classifier, theta_deg, ris_count, rng, &buffers);
    }
    return run_realization_impl(config, classifier, theta_deg, ris_count, rng, nullptr);
}

std::vector<SweepRow> sweep_theta(const ExperimentConfig& config,
                                  const ClassifierRef& classifier) {
    config.validate();
    std::vector<double> grid;
    for (double theta = config.theta_min_deg; theta <= config.theta_max_deg + 1e-9;
         theta += config.theta_step_deg)
        grid.push_back(theta);
    if (grid.empty()) throw std::invalid_argument("sweep_theta: empty grid");

    ParallelRunner runner(config.threads);
    std::vector<SweepRow> rows;
    for (double theta : grid) {
        const CellStats stats = run_cell(config, classifier, theta, /*draw_theta=*/false,
                                         config.scenario.ris_count, runner);
        for (SweepRow& row : rows_for_cell(config, theta, stats)) rows.push_back(row);
    }
    return rows;
}

std::vector<SweepRow> sweep_k(const ExperimentConfig& config, const ClassifierRef& classifier) {
    config.validate();
    ParallelRunner runner(config.threads);
    std::vector<SweepRow> rows;
    for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
        const CellStats stats = run_cell(config, classifier, 0.0, /*draw_theta=*/true, k, runner);
        for (SweepRow& row : rows_for_cell(config, static_cast<double>(k), stats))
            rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "sweep_var,scheme,mean_sinr_db,n,cls_accuracy\n";
    char buffer[160];
    for (const SweepRow& row : rows) {
        std::snprintf(buffer, sizeof buffer, "%.6g,%s,%.6g,%zu,%.6g\n", row.sweep_value,
                      to_string(row.scheme), row.mean_sinr_db, row.realizations,
                      row.cls_accuracy);
        os << buffer;
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

EvalResult eval_with(const LabeledDataset& test,
                     const std::function<SignalClass(const IqWindow&)>& infer) {
    if (test.windows.empty()) throw std::invalid_argument("eval: empty test set");
    EvalResult result;
    result.count = test.windows.size();
    for (const IqWindow& w : test.windows) {
        if (!w.label) throw std::invalid_argument("eval: unlabeled window");
        const auto truth = static_cast<std::size_t>(*w.label);
        result.confusion[truth][static_cast<std::size_t>(infer(w))]++;
    }
    std::uint64_t diag = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        std::uint64_t row = 0;
        for (std::size_t p = 0; p < 4; ++p) row += result.confusion[c][p];
        diag += result.confusion[c][c];
        result.per_class_accuracy[c] =
            row ? static_cast<double>(result.confusion[c][c]) / static_cast<double>(row) : 0.0;
    }
    result.overall_accuracy = static_cast<double>(diag) / static_cast<double>(result.count);
    return result;
}

EvalResult eval_classifier(const CnnModel& model, const LabeledDataset& test, unsigned threads) {
    if (test.windows.empty()) throw std::invalid_argument("eval: empty test set");
    const std::size_t n = test.windows.size();
    const std::size_t chunks = std::min<std::size_t>(kSweepChunks, n);

    std::vector<EvalResult> partial(chunks);
    ParallelRunner runner(threads);
    runner.run(chunks, [&](std::size_t c) {
        ForwardBuffers buffers(model.shape);
        const std::size_t begin = c * n / chunks;
        const std::size_t end = (c + 1) * n / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            const IqWindow& w = test.windows[i];
            if (!w.label) throw std::invalid_argument("eval: unlabeled window");
            if (w.length() != model.shape.window_len)
                throw std::invalid_argument("eval: window length does not match the model");
            const auto truth = static_cast<std::size_t>(*w.label);
            partial[c].confusion[truth][static_cast<std::size_t>(
                classify_window(model, w, buffers))]++;
        }
    });

    EvalResult result;
    result.count = n;
    for (const EvalResult& p : partial)
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t j = 0; j < 4; ++j) result.confusion[c][j] += p.confusion[c][j];
    std::uint64_t diag = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        std::uint64_t row = 0;
        for (std::size_t p = 0; p < 4; ++p) row += result.confusion[c][p];
        diag += result.confusion[c][c];
        result.per_class_accuracy[c] =
            row ? static_cast<double>(result.confusion[c][c]) / static_cast<double>(row) : 0.0;
    }
    result.overall_accuracy = static_cast<double>(diag) / static_cast<double>(n);
    return result;
}

}  // namespace slris
