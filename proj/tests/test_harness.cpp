#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slris/config.hpp"
#include "slris/experiment.hpp"

using namespace slris;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("slris-harness-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_text(const fs::path& p) {
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

ExperimentConfig fast_config() {
    ExperimentConfig config;
    config.realizations = 200;
    config.window_len = 32;
    config.seed = 5;
    return config;
}

}  // namespace

TEST_CASE("perfect classifier with one surface achieves the two-case maximum") {
    ExperimentConfig config = fast_config();
    ClassifierRef perfect{ClassifierMode::Perfect};
    for (double theta : {10.0, 36.0, 38.0, 90.0, 150.0}) {
        Rng rng(77);
        const RealizationResult r = run_realization(config, perfect, theta, 1, rng);
        CHECK(r.inference_correct);
        CHECK(r.proposed_sinr_db ==
              doctest::Approx(std::max(r.always_on_sinr_db, r.always_off_sinr_db))
                  .epsilon(1e-12));
    }
}

TEST_CASE("always-off SINR does not depend on the surface count") {
    ExperimentConfig config = fast_config();
    ClassifierRef perfect{ClassifierMode::Perfect};
    double reference = 0.0;
    for (std::size_t k = 1; k <= 10; ++k) {
        Rng rng(31);
        const RealizationResult r = run_realization(config, perfect, 75.0, k, rng);
        if (k == 1) reference = r.always_off_sinr_db;
        CHECK(r.always_off_sinr_db == doctest::Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("sweep over theta is deterministic and properly shaped") {
    ExperimentConfig config = fast_config();
    config.theta_min_deg = 30.0;
    config.theta_max_deg = 90.0;
    config.theta_step_deg = 30.0;
    ClassifierRef perfect{ClassifierMode::Perfect};

    const auto rows = sweep_theta(config, perfect);
    REQUIRE(rows.size() == 3 * 3);  // 3 grid points x 3 schemes
    CHECK(rows[0].sweep_value == 30.0);
    CHECK(rows[0].scheme == Scheme::Proposed);
    CHECK(rows[8].sweep_value == 90.0);
    for (const SweepRow& row : rows) {
        CHECK(row.realizations == 200);
        CHECK(row.cls_accuracy == 1.0);
    }

    const auto again = sweep_theta(config, perfect);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mean_sinr_db == again[i].mean_sinr_db);
        CHECK(rows[i].cls_accuracy == again[i].cls_accuracy);
    }
}

TEST_CASE("interference-free truth makes always-on dominate always-off") {
    ExperimentConfig config = fast_config();
    config.true_class = SignalClass::DOnly;  // interferer silent in truth
    config.theta_min_deg = 10.0;
    config.theta_max_deg = 150.0;
    config.theta_step_deg = 20.0;
    ClassifierRef perfect{ClassifierMode::Perfect};
    const auto rows = sweep_theta(config, perfect);
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const double proposed = rows[i].mean_sinr_db;
        const double on = rows[i + 1].mean_sinr_db;
        const double off = rows[i + 2].mean_sinr_db;
        CHECK(on >= off);
        CHECK(proposed == doctest::Approx(on).epsilon(1e-12));  // DOnly decision is all-on
    }
}

TEST_CASE("sweep over the surface count leaves always-off flat") {
    ExperimentConfig config = fast_config();
    config.k_min = 1;
    config.k_max = 6;
    ClassifierRef perfect{ClassifierMode::Perfect};
    const auto rows = sweep_k(config, perfect);
    REQUIRE(rows.size() == 6 * 3);

    double off_reference = 0.0;
    double last_on = -1e300, last_proposed = -1e300;
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const double proposed = rows[i].mean_sinr_db;
        const double on = rows[i + 1].mean_sinr_db;
        const double off = rows[i + 2].mean_sinr_db;
        if (i == 0) off_reference = off;
        CHECK(off == doctest::Approx(off_reference).epsilon(1e-12));
        CHECK(on >= last_on);
        CHECK(proposed >= last_proposed);
        CHECK(proposed >= on - 1e-12);
        CHECK(proposed >= off - 1e-12);
        last_on = on;
        last_proposed = proposed;
    }
}

TEST_CASE("csv output matches the pinned schema and is byte-stable") {
    TempDir tmp;
    ExperimentConfig config = fast_config();
    config.theta_min_deg = 40.0;
    config.theta_max_deg = 60.0;
    config.theta_step_deg = 10.0;
    ClassifierRef perfect{ClassifierMode::Perfect};
    const auto rows = sweep_theta(config, perfect);

    write_sweep_csv(rows, tmp.path / "a.csv");
    write_sweep_csv(rows, tmp.path / "b.csv");
    const std::string a = read_text(tmp.path / "a.csv");
    CHECK(a == read_text(tmp.path / "b.csv"));
    CHECK(a.starts_with("sweep_var,scheme,mean_sinr_db,n,cls_accuracy\n"));
    CHECK(a.find("Proposed") != std::string::npos);
    CHECK(a.find("AlwaysOn") != std::string::npos);
    CHECK(a.find("AlwaysOff") != std::string::npos);
}

TEST_CASE("corruption produces nested, monotone degradation") {
    ExperimentConfig config = fast_config();
    config.realizations = 2000;
    ClassifierRef none{ClassifierMode::Corrupted, nullptr, 0.0};
    ClassifierRef some{ClassifierMode::Corrupted, nullptr, 0.05};
    ClassifierRef lots{ClassifierMode::Corrupted, nullptr, 0.20};

    double mean_none = 0.0, mean_some = 0.0, mean_lots = 0.0;
    std::size_t correct_some = 0, correct_lots = 0;
    const Rng root = Rng(config.seed).split(1);
    for (std::size_t r = 0; r < config.realizations; ++r) {
        // Same realization stream for every rate: corrupted sets are nested.
        Rng r0 = root.split(r), r1 = root.split(r), r2 = root.split(r);
        const RealizationResult a = run_realization(config, none, 60.0, 1, r0);
        const RealizationResult b = run_realization(config, some, 60.0, 1, r1);
        const RealizationResult c = run_realization(config, lots, 60.0, 1, r2);
        mean_none += a.proposed_sinr_db;
        mean_some += b.proposed_sinr_db;
        mean_lots += c.proposed_sinr_db;
        correct_some += b.inference_correct;
        correct_lots += c.inference_correct;
        // Pointwise: the wrong decision can never beat the two-case optimum.
        CHECK(b.proposed_sinr_db <= a.proposed_sinr_db + 1e-12);
        CHECK(c.proposed_sinr_db <= b.proposed_sinr_db + 1e-12);
    }
    CHECK(mean_none >= mean_some);
    CHECK(mean_some >= mean_lots);
    CHECK(correct_some > correct_lots);
}

TEST_CASE("model-backed realizations validate the window length") {
    ExperimentConfig config = fast_config();
    config.window_len = 128;
    CnnShape shape;
    shape.window_len = 32;
    CnnModel model = CnnModel::random_init(shape, 3);
    ClassifierRef ref{ClassifierMode::Model, &model};
    Rng rng(9);
    CHECK_THROWS_AS(run_realization(config, ref, 90.0, 1, rng), std::invalid_argument);
}

TEST_CASE("eval_with tallies stubbed predictors correctly") {
    auto ds = build_dataset(50, 32, {0.0, 20.0}, desired_signature(), interferer_signature(), 3);

    const EvalResult perfect = eval_with(ds, [](const IqWindow& w) { return *w.label; });
    CHECK(perfect.overall_accuracy == 1.0);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(perfect.per_class_accuracy[c] == 1.0);
        for (std::size_t p = 0; p < 4; ++p)
            CHECK(perfect.confusion[c][p] == (c == p ? 50u : 0u));
    }

    Rng rng(5);
    const EvalResult random = eval_with(ds, [&rng](const IqWindow&) {
        return static_cast<SignalClass>(rng.uniform_index(4));
    });
    CHECK(random.overall_accuracy == doctest::Approx(0.25).epsilon(0.35));
}

TEST_CASE("chance-level predictors score near 25 percent at scale") {
    auto ds =
        build_dataset(2500, 32, {0.0, 20.0}, desired_signature(), interferer_signature(), 11);
    Rng rng(13);
    const EvalResult random = eval_with(ds, [&rng](const IqWindow&) {
        return static_cast<SignalClass>(rng.uniform_index(4));
    });
    CHECK(std::abs(random.overall_accuracy - 0.25) < 0.03);
    for (double acc : random.per_class_accuracy) CHECK(std::abs(acc - 0.25) < 0.03);
}

TEST_CASE("eval_classifier agrees with eval_with over the model's argmax") {
    auto ds = build_dataset(20, 32, {0.0, 20.0}, desired_signature(), interferer_signature(), 17);
    CnnShape shape;
    shape.window_len = 32;
    shape.conv1_filters = 4;
    shape.conv2_filters = 4;
    shape.hidden = 8;
    CnnModel model = CnnModel::random_init(shape, 19);

    const EvalResult direct = eval_classifier(model, ds);
    const EvalResult reference = eval_with(ds, [&model](const IqWindow& w) {
        return static_cast<SignalClass>(argmax_class(predict(model, w)));
    });
    CHECK(direct.confusion == reference.confusion);
    CHECK(direct.overall_accuracy == reference.overall_accuracy);

    LabeledDataset empty;
    CHECK_THROWS_AS(eval_classifier(model, empty), std::invalid_argument);
}

TEST_CASE("config files apply known keys and reject unknown ones") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "sweep.cfg";
    {
        std::ofstream os(cfg);
        os << "# figure settings\n";
        os << "theta = 45\n";
        os << "K = 3\n";
        os << "N = 128\n";
        os << "p_i = 15  # dBm\n";
        os << "realizations = 123\n";
        os << "schemes = Proposed,AlwaysOff\n";
        os << "seed = 99\n";
    }
    ExperimentConfig config;
    apply_config_file(config, cfg);
    CHECK(config.scenario.theta_deg == 45.0);
    CHECK(config.scenario.ris_count == 3);
    CHECK(config.scenario.elements_per_ris == 128);
    CHECK(config.scenario.p_i_dbm == 15.0);
    CHECK(config.realizations == 123);
    CHECK(config.seed == 99);
    REQUIRE(config.schemes.size() == 2);
    CHECK(config.schemes[1] == Scheme::AlwaysOff);

    {
        std::ofstream os(cfg, std::ios::trunc);
        os << "not_a_key = 1\n";
    }
    ExperimentConfig other;
    CHECK_THROWS_AS(apply_config_file(other, cfg), std::invalid_argument);

    {
        std::ofstream os(cfg, std::ios::trunc);
        os << "theta fifty\n";
    }
    CHECK_THROWS_AS(apply_config_file(other, cfg), std::invalid_argument);
}

TEST_CASE("experiment validation rejects empty grids and bad sizes") {
    ExperimentConfig config = fast_config();
    config.theta_min_deg = 100.0;
    config.theta_max_deg = 50.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = fast_config();
    config.realizations = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = fast_config();
    config.k_min = 5;
    config.k_max = 2;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = fast_config();
    config.window_len = 77;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
