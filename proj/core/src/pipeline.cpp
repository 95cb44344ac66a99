#include "slris/pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "slris/rng.hpp"

namespace slris {

namespace {

// Stage tags for per-stage seed derivation.
enum : std::uint64_t { kSeedDataset = 1, kSeedSplit, kSeedInit, kSeedTrain, kSeedTheta, kSeedK };

void log_line(std::ostream* log, const std::string& line) {
    if (log) *log << line << '\n' << std::flush;
}

}  // namespace

void write_train_report(const TrainReport& report, const EvalResult& eval, std::ostream& os) {
    // Deliberately no wall-clock fields: the report must be byte-identical
    // across seeded reruns.
    os << std::setprecision(6);
    os << "parameters: " << report.parameter_count << "\n";
    os << "initial_loss: " << report.initial_loss << "\n";
    for (std::size_t e = 0; e < report.epoch_train_loss.size(); ++e)
        os << "epoch " << e + 1 << ": loss " << report.epoch_train_loss[e] << " accuracy "
           << report.epoch_train_accuracy[e] << "\n";
    os << "test_accuracy: " << eval.overall_accuracy << "\n";
    for (std::size_t c = 0; c < 4; ++c)
        os << "accuracy[" << to_string(static_cast<SignalClass>(c))
           << "]: " << eval.per_class_accuracy[c] << "\n";
    os << "confusion (rows = truth, cols = predicted):\n";
    for (std::size_t c = 0; c < 4; ++c) {
        os << " ";
        for (std::size_t p = 0; p < 4; ++p) os << " " << std::setw(7) << eval.confusion[c][p];
        os << "\n";
    }
}

PipelineArtifacts run_all(const PipelineOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);

    PipelineArtifacts artifacts;
    artifacts.dataset_path = options.out_dir / "dataset.risl";
    artifacts.model_path = options.out_dir / "model.rism";
    artifacts.report_path = options.out_dir / "train_report.txt";
    artifacts.theta_csv_path = options.out_dir / "sweep_theta.csv";
    artifacts.k_csv_path = options.out_dir / "sweep_k.csv";

    log_line(options.log, "building dataset (" + std::to_string(options.n_per_class) +
                              " windows/class, L=" + std::to_string(options.window_len) + ")");
    const LabeledDataset dataset = build_dataset(
        options.n_per_class, options.window_len, {options.snr_lo_db, options.snr_hi_db},
        desired_signature(), interferer_signature(), mix_seed(options.seed, kSeedDataset));
    save_dataset(dataset, artifacts.dataset_path);

    const DatasetSplit split =
        split_dataset(dataset, options.split_ratio, mix_seed(options.seed, kSeedSplit));

    CnnShape shape;
    shape.window_len = options.window_len;
    const CnnModel init = CnnModel::random_init(shape, mix_seed(options.seed, kSeedInit));

    TrainConfig train_config = options.train;
    train_config.seed = mix_seed(options.seed, kSeedTrain);
    log_line(options.log, "training (" + std::to_string(train_config.epochs) + " epochs, " +
                              std::to_string(split.train.size()) + " windows)");
    auto [model, report] = train(init, split, train_config);
    artifacts.report = report;
    save_model(model, artifacts.model_path);
    log_line(options.log,
             "trained in " + std::to_string(report.train_seconds) + " s, test accuracy " +
                 std::to_string(report.test_accuracy));

    artifacts.eval = eval_classifier(model, split.test, train_config.threads);
    {
        std::ofstream os(artifacts.report_path, std::ios::trunc);
        write_train_report(report, artifacts.eval, os);
    }

    ExperimentConfig experiment = options.experiment;
    experiment.window_len = options.window_len;
    experiment.window_snr_lo_db = options.snr_lo_db;
    experiment.window_snr_hi_db = options.snr_hi_db;
    experiment.classifier_path = artifacts.model_path.string();

    ClassifierRef classifier;
    if (options.perfect_classifier) {
        classifier.mode = ClassifierMode::Perfect;
    } else {
        classifier.mode = ClassifierMode::Model;
        classifier.model = &model;
    }

    experiment.seed = mix_seed(options.seed, kSeedTheta);
    log_line(options.log, "sweep over incidence angle");
    write_sweep_csv(sweep_theta(experiment, classifier), artifacts.theta_csv_path);

    experiment.seed = mix_seed(options.seed, kSeedK);
    log_line(options.log, "sweep over surface count");
    write_sweep_csv(sweep_k(experiment, classifier), artifacts.k_csv_path);

    return artifacts;
}

}  // namespace slris
