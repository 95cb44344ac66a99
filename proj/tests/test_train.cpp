#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slris/io.hpp"
#include "slris/train.hpp"

using namespace slris;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("slris-train-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CnnShape tiny_shape() {
    CnnShape s;
    s.window_len = 32;
    s.conv1_filters = 4;
    s.conv1_kernel = 5;
    s.conv2_filters = 4;
    s.conv2_kernel = 5;
    s.hidden = 8;
    return s;
}

DatasetSplit tiny_split(std::size_t n_per_class, std::uint64_t seed) {
    auto ds = build_dataset(n_per_class, 32, {0.0, 20.0}, desired_signature(),
                            interferer_signature(), seed);
    return split_dataset(ds, 0.8, seed + 1);
}

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("initial loss on balanced data is ln 4") {
    auto split = tiny_split(32, 3);
    CnnModel init = CnnModel::random_init(tiny_shape(), 5);
    TrainConfig config;
    config.epochs = 1;
    config.seed = 9;
    auto [model, report] = train(init, split, config);
    CHECK(report.initial_loss == doctest::Approx(std::log(4.0)).epsilon(0.1 / std::log(4.0)));
}

TEST_CASE("a tiny train set is memorized") {
    // 32 windows, 200 epochs: the model must overfit to >= 99% train accuracy.
    auto ds = build_dataset(8, 32, {10.0, 20.0}, desired_signature(), interferer_signature(), 7);
    DatasetSplit split;
    split.train = ds;
    split.ratio = 1.0;

    CnnModel init = CnnModel::random_init(tiny_shape(), 11);
    TrainConfig config;
    config.epochs = 200;
    config.batch_size = 8;
    config.seed = 13;
    auto [model, report] = train(init, split, config);
    REQUIRE(report.epoch_train_accuracy.size() == 200);
    CHECK(report.epoch_train_accuracy.back() >= 0.99);
}

TEST_CASE("training is bit-deterministic in the seed") {
    auto split = tiny_split(16, 21);
    CnnModel init = CnnModel::random_init(tiny_shape(), 23);
    TrainConfig config;
    config.epochs = 3;
    config.seed = 29;

    auto [m1, r1] = train(init, split, config);
    auto [m2, r2] = train(init, split, config);
    CHECK(m1.params == m2.params);
    CHECK(r1.epoch_train_loss == r2.epoch_train_loss);

    config.threads = 1;
    auto [m3, r3] = train(init, split, config);
    CHECK(m1.params == m3.params);  // thread count must not change the result
}

TEST_CASE("train validates inputs") {
    CnnModel init = CnnModel::random_init(tiny_shape(), 1);
    DatasetSplit empty;
    empty.train.window_len = 32;
    TrainConfig config;
    CHECK_THROWS_AS(train(init, empty, config), std::invalid_argument);

    auto split = tiny_split(8, 2);
    TrainConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(train(init, split, bad), std::invalid_argument);
}

TEST_CASE("confusion matrix rows sum to per-class test counts") {
    auto split = tiny_split(16, 31);
    CnnModel init = CnnModel::random_init(tiny_shape(), 33);
    TrainConfig config;
    config.epochs = 2;
    config.seed = 35;
    auto [model, report] = train(init, split, config);

    const auto counts = split.test.class_counts();
    for (std::size_t c = 0; c < 4; ++c) {
        std::uint64_t row = 0;
        for (std::size_t p = 0; p < 4; ++p) row += report.confusion[c][p];
        CHECK(row == counts[c]);
    }
}

TEST_CASE("predict returns a posterior over the four classes") {
    CnnModel model = CnnModel::random_init(tiny_shape(), 41);
    Rng rng(43);
    IqWindow w =
        make_window(SignalClass::Both, 32, 10.0, desired_signature(), interferer_signature(), rng);
    auto posterior = predict(model, w);
    double sum = 0.0;
    for (double p : posterior) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    IqWindow wrong;
    wrong.samples.resize(128);
    CHECK_THROWS_AS(predict(model, wrong), std::invalid_argument);
}

TEST_CASE("an all-zero model predicts the uniform posterior") {
    CnnModel model = CnnModel::zeros(tiny_shape());
    Rng rng(47);
    IqWindow w =
        make_window(SignalClass::Idle, 32, 5.0, desired_signature(), interferer_signature(), rng);
    auto posterior = predict(model, w);
    for (double p : posterior) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("model save/load round trip preserves predictions bit-for-bit") {
    TempDir tmp;
    CnnModel model = CnnModel::random_init(tiny_shape(), 51);
    const fs::path path = tmp.path / "m.rism";
    save_model(model, path);
    CnnModel loaded = load_model(path);
    CHECK(loaded.shape == model.shape);
    CHECK(loaded.params == model.params);

    Rng rng(53);
    IqWindow probe =
        make_window(SignalClass::Both, 32, 12.0, desired_signature(), interferer_signature(), rng);
    CHECK(predict(model, probe) == predict(loaded, probe));
}

TEST_CASE("model files are byte-stable across saves") {
    TempDir tmp;
    CnnModel model = CnnModel::random_init(tiny_shape(), 57);
    save_model(model, tmp.path / "a.rism");
    save_model(model, tmp.path / "b.rism");
    CHECK(read_bytes(tmp.path / "a.rism") == read_bytes(tmp.path / "b.rism"));
}

TEST_CASE("model loader reports malformed files distinctly") {
    TempDir tmp;
    CnnModel model = CnnModel::random_init(tiny_shape(), 61);
    save_model(model, tmp.path / "m.rism");
    auto bytes = read_bytes(tmp.path / "m.rism");

    auto write = [&](const fs::path& p, const std::vector<char>& b) {
        std::ofstream os(p, std::ios::binary | std::ios::trunc);
        os.write(b.data(), static_cast<std::streamsize>(b.size()));
    };

    auto bad_magic = bytes;
    bad_magic[1] = 'Z';
    write(tmp.path / "magic.rism", bad_magic);
    CHECK_THROWS_AS(load_model(tmp.path / "magic.rism"), FormatError);

    auto bad_version = bytes;
    bad_version[4] = 9;
    write(tmp.path / "version.rism", bad_version);
    try {
        load_model(tmp.path / "version.rism");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::BadVersion);
    }

    auto truncated = bytes;
    truncated.resize(truncated.size() - 5);
    write(tmp.path / "short.rism", truncated);
    try {
        load_model(tmp.path / "short.rism");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::Truncated);
    }

    // Shape header inconsistent with the payload length.
    auto trailing = bytes;
    trailing.insert(trailing.end(), 8, '\0');
    write(tmp.path / "long.rism", trailing);
    try {
        load_model(tmp.path / "long.rism");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::Corrupt);
    }
}

TEST_CASE("mean_loss matches a direct computation") {
    CnnModel model = CnnModel::zeros(tiny_shape());
    auto ds = build_dataset(2, 32, {5.0, 15.0}, desired_signature(), interferer_signature(), 71);
    // Zero model emits uniform posteriors, so the loss is exactly ln 4.
    CHECK(mean_loss(model, ds.windows) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}
