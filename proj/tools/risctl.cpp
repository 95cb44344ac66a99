// risctl: dataset generation, classifier training/evaluation and the two
// SINR sweeps, driven by flat config files with CLI overrides.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "slris/config.hpp"
#include "slris/pipeline.hpp"

using namespace slris;
using nlohmann::json;

namespace {

json report_to_json(const TrainReport& report, const EvalResult& eval) {
    json j;
    j["parameters"] = report.parameter_count;
    j["initial_loss"] = report.initial_loss;
    j["epoch_train_loss"] = report.epoch_train_loss;
    j["epoch_train_accuracy"] = report.epoch_train_accuracy;
    j["train_seconds"] = report.train_seconds;
    j["test_accuracy"] = eval.overall_accuracy;
    json per_class;
    for (std::size_t c = 0; c < 4; ++c)
        per_class[to_string(static_cast<SignalClass>(c))] = eval.per_class_accuracy[c];
    j["per_class_accuracy"] = per_class;
    j["confusion"] = eval.confusion;
    return j;
}

void print_eval(const EvalResult& eval) {
    std::cout << "windows: " << eval.count << "\n";
    std::cout << "overall accuracy: " << eval.overall_accuracy << "\n";
    for (std::size_t c = 0; c < 4; ++c)
        std::cout << "  " << to_string(static_cast<SignalClass>(c)) << ": "
                  << eval.per_class_accuracy[c] << "\n";
    std::cout << "confusion (rows = truth, cols = predicted):\n";
    for (std::size_t c = 0; c < 4; ++c) {
        std::cout << "  " << to_string(static_cast<SignalClass>(c)) << ":";
        for (std::size_t p = 0; p < 4; ++p) std::cout << "\t" << eval.confusion[c][p];
        std::cout << "\n";
    }
}

struct SweepCli {
    std::string config_path;
    std::string model_path;
    std::string out_path;
    bool perfect = false;
    bool has_seed = false;
    std::uint64_t seed = 1;
    bool has_realizations = false;
    std::size_t realizations = 0;
};

void add_sweep_options(CLI::App* cmd, SweepCli& cli) {
    cmd->add_option("--config", cli.config_path, "flat key=value config file");
    cmd->add_option("--model", cli.model_path, "classifier checkpoint (.rism)");
    cmd->add_option("--out", cli.out_path, "output CSV path");
    cmd->add_flag("--perfect-classifier", cli.perfect,
                  "substitute the ground-truth oracle for the classifier");
    cmd->add_option("--seed", cli.seed, "experiment seed")->each([&](const std::string&) {
        cli.has_seed = true;
    });
    cmd->add_option("--realizations", cli.realizations, "realizations per sweep cell")
        ->each([&](const std::string&) { cli.has_realizations = true; });
}

int run_sweep(const SweepCli& cli, bool over_theta) {
    ExperimentConfig config;
    if (!cli.config_path.empty()) apply_config_file(config, cli.config_path);
    if (cli.has_seed) config.seed = cli.seed;
    if (cli.has_realizations) config.realizations = cli.realizations;
    if (!cli.model_path.empty()) config.classifier_path = cli.model_path;
    if (!cli.out_path.empty()) config.output_path = cli.out_path;
    if (config.output_path.empty())
        throw std::invalid_argument("no output path (--out or output_path in the config)");

    ClassifierRef classifier;
    CnnModel model;
    if (cli.perfect) {
        classifier.mode = ClassifierMode::Perfect;
    } else {
        if (config.classifier_path.empty())
            throw std::invalid_argument(
                "no classifier (--model, classifier_path, or --perfect-classifier)");
        model = load_model(config.classifier_path);
        config.window_len = model.shape.window_len;
        classifier.mode = ClassifierMode::Model;
        classifier.model = &model;
    }

    const auto rows = over_theta ? sweep_theta(config, classifier) : sweep_k(config, classifier);
    write_sweep_csv(rows, config.output_path);
    std::cout << "wrote " << rows.size() << " rows to " << config.output_path << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrum-learning ON/OFF RIS control simulator"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "synthesize a labeled I/Q dataset");
    std::string gen_out = "dataset.risl";
    std::size_t gen_n = 10000, gen_len = 512;
    double gen_snr_lo = 0.0, gen_snr_hi = 20.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--out", gen_out, "output .risl path");
    gen->add_option("--n-per-class", gen_n, "windows per occupancy class")
        ->check(CLI::PositiveNumber);
    gen->add_option("--window-len", gen_len, "window length")
        ->check(CLI::IsMember({32, 128, 512}));
    gen->add_option("--snr-lo", gen_snr_lo, "lower SNR bound, dB");
    gen->add_option("--snr-hi", gen_snr_hi, "upper SNR bound, dB");
    gen->add_option("--seed", gen_seed, "generation seed");

    // train
    auto* tr = app.add_subcommand("train", "train the classifier on a dataset");
    std::string tr_data, tr_out = "model.rism", tr_report;
    double tr_ratio = 0.8, tr_lr = 1e-3;
    std::size_t tr_epochs = 20, tr_batch = 64;
    std::uint64_t tr_seed = 1;
    tr->add_option("--data", tr_data, "input .risl dataset")->required();
    tr->add_option("--out", tr_out, "output .rism checkpoint");
    tr->add_option("--report", tr_report, "write the training report as JSON");
    tr->add_option("--ratio", tr_ratio, "train fraction of the dataset");
    tr->add_option("--epochs", tr_epochs, "training epochs");
    tr->add_option("--batch", tr_batch, "mini-batch size");
    tr->add_option("--lr", tr_lr, "Adam learning rate");
    tr->add_option("--seed", tr_seed, "split/init/shuffle seed");

    // eval
    auto* ev = app.add_subcommand("eval", "confusion matrix of a model on a dataset");
    std::string ev_model, ev_data;
    ev->add_option("--model", ev_model, "classifier checkpoint (.rism)")->required();
    ev->add_option("--data", ev_data, "labeled dataset (.risl)")->required();

    // sweeps
    SweepCli theta_cli, k_cli;
    auto* st = app.add_subcommand("sweep-theta", "mean SINR vs incidence angle (CSV)");
    add_sweep_options(st, theta_cli);
    auto* sk = app.add_subcommand("sweep-k", "mean SINR vs surface count (CSV)");
    add_sweep_options(sk, k_cli);

    // all
    auto* al = app.add_subcommand("all", "dataset -> train -> eval -> both sweeps");
    std::string all_outdir = "out", all_config;
    std::size_t all_n = 10000, all_len = 512, all_epochs = 20, all_realizations = 0;
    std::uint64_t all_seed = 1;
    bool all_perfect = false;
    al->add_option("--out", all_outdir, "output directory");
    al->add_option("--config", all_config, "sweep config file");
    al->add_option("--n-per-class", all_n, "windows per class")->check(CLI::PositiveNumber);
    al->add_option("--window-len", all_len, "window length")->check(CLI::IsMember({32, 128, 512}));
    al->add_option("--epochs", all_epochs, "training epochs");
    al->add_option("--realizations", all_realizations, "realizations per sweep cell");
    al->add_option("--seed", all_seed, "master seed for every stage");
    al->add_flag("--perfect-classifier", all_perfect,
                 "run the sweeps with the ground-truth oracle instead of the trained model");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto ds = build_dataset(gen_n, gen_len, {gen_snr_lo, gen_snr_hi},
                                    desired_signature(), interferer_signature(), gen_seed);
            save_dataset(ds, gen_out);
            std::cout << "wrote " << ds.size() << " windows (" << gen_len << " samples each) to "
                      << gen_out << std::endl;
        } else if (tr->parsed()) {
            auto ds = load_dataset(tr_data);
            auto split = split_dataset(ds, tr_ratio, mix_seed(tr_seed, 1));
            CnnShape shape;
            shape.window_len = ds.window_len;
            CnnModel init = CnnModel::random_init(shape, mix_seed(tr_seed, 2));
            TrainConfig config;
            config.epochs = tr_epochs;
            config.batch_size = tr_batch;
            config.learning_rate = tr_lr;
            config.seed = mix_seed(tr_seed, 3);
            std::cout << "training " << init.param_count() << " parameters on "
                      << split.train.size() << " windows..." << std::endl;
            auto [model, report] = train(init, split, config);
            save_model(model, tr_out);
            const EvalResult eval = eval_classifier(model, split.test);
            std::cout << "trained in " << report.train_seconds << "s" << std::endl;
            print_eval(eval);
            if (!tr_report.empty()) {
                std::ofstream os(tr_report, std::ios::trunc);
                os << report_to_json(report, eval).dump(2) << "\n";
            }
            std::cout << "wrote " << tr_out << std::endl;
        } else if (ev->parsed()) {
            const CnnModel model = load_model(ev_model);
            const LabeledDataset ds = load_dataset(ev_data);
            print_eval(eval_classifier(model, ds));
        } else if (st->parsed()) {
            return run_sweep(theta_cli, /*over_theta=*/true);
        } else if (sk->parsed()) {
            return run_sweep(k_cli, /*over_theta=*/false);
        } else if (al->parsed()) {
            PipelineOptions options;
            options.out_dir = all_outdir;
            options.n_per_class = all_n;
            options.window_len = all_len;
            options.train.epochs = all_epochs;
            options.seed = all_seed;
            options.perfect_classifier = all_perfect;
            if (!all_config.empty()) apply_config_file(options.experiment, all_config);
            if (all_realizations > 0) options.experiment.realizations = all_realizations;
            options.log = &std::cout;
            const PipelineArtifacts artifacts = run_all(options);
            std::cout << "pipeline complete:\n"
                      << "  " << artifacts.dataset_path.string() << "\n"
                      << "  " << artifacts.model_path.string() << "\n"
                      << "  " << artifacts.report_path.string() << "\n"
                      << "  " << artifacts.theta_csv_path.string() << "\n"
                      << "  " << artifacts.k_csv_path.string() << std::endl;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
