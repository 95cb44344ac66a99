#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "slris/dataset.hpp"
#include "slris/model.hpp"

namespace slris {

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t batch_size = 64;
    std::size_t epochs = 20;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct TrainReport {
    double initial_loss = 0.0;  // mean loss on the train set before any update
    std::vector<double> epoch_train_loss;
    std::vector<double> epoch_train_accuracy;
    double test_accuracy = 0.0;
    double test_loss = 0.0;
    std::array<double, 4> per_class_accuracy{};
    std::array<std::array<std::uint64_t, 4>, 4> confusion{};  // [true][predicted]
    std::size_t parameter_count = 0;
    double train_seconds = 0.0;
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;

    explicit AdamState(std::size_t n) : first_moment(n, 0.0), second_moment(n, 0.0) {}
};

/// One Adam update with bias correction:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
/// `step` is 1-based. Throws on span length mismatch or step == 0.
void adam_step(std::span<double> params, std::span<const double> grads,
               std::span<double> first_moment, std::span<double> second_moment,
               std::uint64_t step, const TrainConfig& config);

/// Gradients of the mean cross-entropy over `batch` w.r.t. every parameter,
/// flat in the model's block layout. Throws if the forward pass produces a
/// non-finite value or a window is unlabeled / mis-sized.
std::vector<double> backward(const CnnModel& model, std::span<const IqWindow> batch);

/// Mean cross-entropy loss over labeled windows.
double mean_loss(const CnnModel& model, std::span<const IqWindow> windows);

/// Mini-batch Adam training. Deterministic for a fixed (init, split, config):
/// shuffling is driven by config.seed, and batch gradients are reduced over a
/// fixed number of sample chunks in chunk order, so the result does not
/// depend on the thread count. Throws on an empty train set or window/model
/// length mismatch.
std::pair<CnnModel, TrainReport> train(const CnnModel& init, const DatasetSplit& split,
                                       const TrainConfig& config);

}  // namespace slris
