#include "slris/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "slris/nn_ops.hpp"
#include "slris/parallel.hpp"

namespace slris {

namespace {

// Batch gradients are accumulated into this many per-chunk buffers and summed
// in chunk order, making training results independent of the thread count.
constexpr std::size_t kGradChunks = 4;

// Samples per dense-layer pass. The hidden layer's weight matrix is the
// one tensor that does not fit in cache, so it is streamed once per group of
// samples instead of once per sample; kBlock accumulator chains per pass
// keep the inner loops in registers, and the flat dimension is walked in
// kTileF-sized slices so a group's activations stay cache-resident while
// every weight row visits them.
constexpr std::size_t kGroup = 16;
constexpr std::size_t kBlock = 8;
constexpr std::size_t kTileF = 4096;

struct ParamOffsets {
    std::array<std::size_t, 8> offset{};
    explicit ParamOffsets(const CnnShape& shape) {
        const auto sizes = shape.block_sizes();
        std::size_t acc = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            offset[i] = acc;
            acc += sizes[i];
        }
    }
};

struct GradViews {
    double *conv1_w, *conv1_b, *conv2_w, *conv2_b, *dense1_w, *dense1_b, *out_w, *out_b;
    GradViews(double* flat, const ParamOffsets& at)
        : conv1_w(flat + at.offset[0]),
          conv1_b(flat + at.offset[1]),
          conv2_w(flat + at.offset[2]),
          conv2_b(flat + at.offset[3]),
          dense1_w(flat + at.offset[4]),
          dense1_b(flat + at.offset[5]),
          out_w(flat + at.offset[6]),
          out_b(flat + at.offset[7]) {}
};

// Per-chunk scratch: stashed activations for one group of samples plus
// single-sample convolution deltas.
struct ChunkScratch {
    std::vector<double> input;   // kGroup x (2, L)
    std::vector<double> conv1;   // kGroup x (F1, T1), post-ReLU
    std::vector<double> conv2;   // kGroup x (F2, T2), post-ReLU
    std::vector<double> hidden;  // kGroup x H, post-ReLU
    std::vector<double> d_hidden;
    std::vector<double> d_flat;  // kGroup x (F2, T2)
    std::vector<double> d_conv1;
    std::vector<double> d_conv2;
    std::vector<double> acc;  // H x kBlock accumulators / deltas

    explicit ChunkScratch(const CnnShape& s)
        : input(kGroup * CnnShape::in_channels * s.window_len),
          conv1(kGroup * s.conv1_filters * s.conv1_out_len()),
          conv2(kGroup * s.flat_len()),
          hidden(kGroup * s.hidden),
          d_hidden(kGroup * s.hidden),
          d_flat(kGroup * s.flat_len()),
          d_conv1(s.conv1_filters * s.conv1_out_len()),
          d_conv2(s.flat_len()),
          acc(s.hidden * kBlock) {}
};

// hidden[s] = relu(W1 x_s + b1) for a group of m samples. W1 is streamed
// once per kBlock-sized slice of the group; X is walked in kTileF slices so
// the slice stays in cache while all weight rows visit it.
void dense1_forward_group(const CnnModel& model, ChunkScratch& ws, std::size_t m) {
    const CnnShape& s = model.shape;
    const std::size_t flat = s.flat_len(), n_hidden = s.hidden;
    const double* weights = model.dense1_w().data();
    const double* bias = model.dense1_b().data();

    for (std::size_t s0 = 0; s0 < m; s0 += kBlock) {
        const std::size_t sm = std::min(kBlock, m - s0);
        const double* x[kBlock] = {};
        for (std::size_t j = 0; j < sm; ++j) x[j] = ws.conv2.data() + (s0 + j) * flat;

        std::fill(ws.acc.begin(), ws.acc.begin() + n_hidden * kBlock, 0.0);
        for (std::size_t f0 = 0; f0 < flat; f0 += kTileF) {
            const std::size_t len = std::min(flat, f0 + kTileF) - f0;
            for (std::size_t h = 0; h < n_hidden; ++h) {
                const double* w = weights + h * flat + f0;
                double* acc = ws.acc.data() + h * kBlock;
                for (std::size_t j = 0; j < sm; ++j)
                    acc[j] += kernels::dot(w, x[j] + f0, len);
            }
        }
        for (std::size_t j = 0; j < sm; ++j)
            for (std::size_t h = 0; h < n_hidden; ++h)
                ws.hidden[(s0 + j) * n_hidden + h] =
                    std::max(ws.acc[h * kBlock + j] + bias[h], 0.0);
    }
}

// dW1 += sum_s d_hidden_s conv2_s^T and dX_s = W1^T d_hidden_s for the
// group, with the same one-pass streaming and f-tiling as the forward.
void dense1_backward_group(const CnnModel& model, ChunkScratch& ws, std::size_t m,
                           GradViews& g) {
    const CnnShape& s = model.shape;
    const std::size_t flat = s.flat_len(), n_hidden = s.hidden;
    const double* weights = model.dense1_w().data();

    std::fill(ws.d_flat.begin(), ws.d_flat.begin() + m * flat, 0.0);
    for (std::size_t s0 = 0; s0 < m; s0 += kBlock) {
        const std::size_t sm = std::min(kBlock, m - s0);
        const double* x[kBlock] = {};
        double* dx[kBlock] = {};
        for (std::size_t j = 0; j < sm; ++j) {
            x[j] = ws.conv2.data() + (s0 + j) * flat;
            dx[j] = ws.d_flat.data() + (s0 + j) * flat;
        }

        // Hidden deltas, gathered once per block.
        for (std::size_t h = 0; h < n_hidden; ++h) {
            double* c = ws.acc.data() + h * kBlock;
            for (std::size_t j = 0; j < sm; ++j) {
                c[j] = ws.d_hidden[(s0 + j) * n_hidden + h];
                g.dense1_b[h] += c[j];
            }
        }

        for (std::size_t f0 = 0; f0 < flat; f0 += kTileF) {
            const std::size_t len = std::min(flat, f0 + kTileF) - f0;
            for (std::size_t h = 0; h < n_hidden; ++h) {
                const double* c = ws.acc.data() + h * kBlock;
                const double* w = weights + h * flat + f0;
                double* gw = g.dense1_w + h * flat + f0;
                for (std::size_t j = 0; j < sm; ++j) {
                    if (c[j] == 0.0) continue;
                    kernels::axpy(gw, x[j] + f0, c[j], len);
                    kernels::axpy(dx[j] + f0, w, c[j], len);
                }
            }
        }
    }
}

// Forward + reverse pass over batch[begin, end), accumulating unscaled
// gradients into grad_flat. Returns {loss sum, correct count}.
std::pair<double, std::size_t> chunk_backward(const CnnModel& model,
                                              std::span<const IqWindow* const> batch,
                                              std::size_t begin, std::size_t end,
                                              ChunkScratch& ws, const ParamOffsets& at,
                                              double* grad_flat) {
    const CnnShape& s = model.shape;
    const std::size_t t1 = s.conv1_out_len(), t2 = s.conv2_out_len();
    const std::size_t flat = s.flat_len(), n_hidden = s.hidden;
    const std::size_t in_len = CnnShape::in_channels * s.window_len;
    const std::size_t c1_len = s.conv1_filters * t1;
    GradViews g(grad_flat, at);

    double loss_sum = 0.0;
    std::size_t correct = 0;

    for (std::size_t group = begin; group < end; group += kGroup) {
        const std::size_t m = std::min(kGroup, end - group);

        // convolution stack, per sample
        for (std::size_t j = 0; j < m; ++j) {
            const IqWindow& window = *batch[group + j];
            if (!window.label) throw std::invalid_argument("backward: unlabeled window");
            if (window.length() != s.window_len)
                throw std::invalid_argument("backward: window length does not match the model");
            window_to_input(window, ws.input.data() + j * in_len);
            kernels::conv1d_valid(ws.input.data() + j * in_len, CnnShape::in_channels,
                                  s.window_len, model.conv1_w().data(), s.conv1_filters,
                                  s.conv1_kernel, model.conv1_b().data(),
                                  ws.conv1.data() + j * c1_len, true);
            kernels::conv1d_valid(ws.conv1.data() + j * c1_len, s.conv1_filters, t1,
                                  model.conv2_w().data(), s.conv2_filters, s.conv2_kernel,
                                  model.conv2_b().data(), ws.conv2.data() + j * flat, true);
        }

        dense1_forward_group(model, ws, m);

        // output layer, loss and hidden deltas, per sample
        for (std::size_t j = 0; j < m; ++j) {
            const double* hidden = ws.hidden.data() + j * n_hidden;
            std::array<double, 4> logits;
            kernels::dense(hidden, n_hidden, model.out_w().data(), CnnShape::num_classes,
                           model.out_b().data(), logits.data(), false);
            for (double v : logits)
                if (!std::isfinite(v))
                    throw std::runtime_error("backward: non-finite forward pass");

            const auto label = static_cast<std::size_t>(*batch[group + j]->label);
            loss_sum += cross_entropy_from_logits(logits, label);
            if (argmax_class(logits) == label) ++correct;

            std::array<double, 4> d_logits = logits;
            kernels::softmax_inplace(d_logits.data(), d_logits.size());
            d_logits[label] -= 1.0;

            double* dh = ws.d_hidden.data() + j * n_hidden;
            std::fill(dh, dh + n_hidden, 0.0);
            const double* out_w = model.out_w().data();
            for (std::size_t c = 0; c < CnnShape::num_classes; ++c) {
                const double dc = d_logits[c];
                g.out_b[c] += dc;
                double* gw = g.out_w + c * n_hidden;
                const double* wc = out_w + c * n_hidden;
                for (std::size_t h = 0; h < n_hidden; ++h) {
                    gw[h] += dc * hidden[h];
                    dh[h] += dc * wc[h];
                }
            }
            for (std::size_t h = 0; h < n_hidden; ++h)
                if (hidden[h] <= 0.0) dh[h] = 0.0;
        }

        dense1_backward_group(model, ws, m, g);

        // convolution backward, per sample
        for (std::size_t j = 0; j < m; ++j) {
            const double* conv1 = ws.conv1.data() + j * c1_len;
            const double* conv2 = ws.conv2.data() + j * flat;
            double* d2 = ws.d_conv2.data();
            const double* dflat = ws.d_flat.data() + j * flat;
            for (std::size_t i = 0; i < flat; ++i) d2[i] = conv2[i] > 0.0 ? dflat[i] : 0.0;

            const double* k2 = model.conv2_w().data();
            std::fill(ws.d_conv1.begin(), ws.d_conv1.end(), 0.0);
            for (std::size_t co = 0; co < s.conv2_filters; ++co) {
                const double* dout = d2 + co * t2;
                double bias_acc = 0.0;
                for (std::size_t t = 0; t < t2; ++t) bias_acc += dout[t];
                g.conv2_b[co] += bias_acc;
                for (std::size_t ci = 0; ci < s.conv1_filters; ++ci) {
                    const double* x = conv1 + ci * t1;
                    double* dx = ws.d_conv1.data() + ci * t1;
                    const double* w = k2 + (co * s.conv1_filters + ci) * s.conv2_kernel;
                    double* gw = g.conv2_w + (co * s.conv1_filters + ci) * s.conv2_kernel;
                    for (std::size_t tau = 0; tau < s.conv2_kernel; ++tau) {
                        gw[tau] += kernels::dot(dout, x + tau, t2);
                        kernels::axpy(dx + tau, dout, w[tau], t2);
                    }
                }
            }
            for (std::size_t i = 0; i < c1_len; ++i)
                if (conv1[i] <= 0.0) ws.d_conv1[i] = 0.0;

            const double* input = ws.input.data() + j * in_len;
            for (std::size_t co = 0; co < s.conv1_filters; ++co) {
                const double* dout = ws.d_conv1.data() + co * t1;
                double bias_acc = 0.0;
                for (std::size_t t = 0; t < t1; ++t) bias_acc += dout[t];
                g.conv1_b[co] += bias_acc;
                for (std::size_t ci = 0; ci < CnnShape::in_channels; ++ci) {
                    const double* x = input + ci * s.window_len;
                    double* gw = g.conv1_w + (co * CnnShape::in_channels + ci) * s.conv1_kernel;
                    for (std::size_t tau = 0; tau < s.conv1_kernel; ++tau)
                        gw[tau] += kernels::dot(dout, x + tau, t1);
                }
            }
        }
    }
    return {loss_sum, correct};
}

struct BatchWorkspace {
    std::vector<std::vector<double>> chunk_grads;
    std::vector<ChunkScratch> chunk_scratch;
    std::array<double, kGradChunks> chunk_loss{};
    std::array<std::size_t, kGradChunks> chunk_correct{};

    BatchWorkspace(const CnnShape& shape, std::size_t param_count) {
        chunk_grads.assign(kGradChunks, std::vector<double>(param_count, 0.0));
        chunk_scratch.reserve(kGradChunks);
        for (std::size_t i = 0; i < kGradChunks; ++i) chunk_scratch.emplace_back(shape);
    }
};

// Accumulates the mean-loss gradient over `batch` into `grads` (overwritten).
// Returns {loss sum, correct count}.
std::pair<double, std::size_t> batch_backward(const CnnModel& model,
                                              std::span<const IqWindow* const> batch,
                                              ParallelRunner& runner, BatchWorkspace& ws,
                                              std::vector<double>& grads) {
    const ParamOffsets at(model.shape);
    const std::size_t n = batch.size();
    const std::size_t chunks = std::min<std::size_t>(kGradChunks, n);

    runner.run(chunks, [&](std::size_t c) {
        std::fill(ws.chunk_grads[c].begin(), ws.chunk_grads[c].end(), 0.0);
        const std::size_t begin = c * n / chunks;
        const std::size_t end = (c + 1) * n / chunks;
        auto [loss, correct] = chunk_backward(model, batch, begin, end, ws.chunk_scratch[c], at,
                                              ws.chunk_grads[c].data());
        ws.chunk_loss[c] = loss;
        ws.chunk_correct[c] = correct;
    });

    grads.assign(model.param_count(), 0.0);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::vector<double>& src = ws.chunk_grads[c];
        for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += src[i];
        loss_sum += ws.chunk_loss[c];
        correct += ws.chunk_correct[c];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& v : grads) v *= inv;
    return {loss_sum, correct};
}

// Parallel forward-only pass: per-chunk loss sums and confusion counts,
// reduced in chunk order.
struct EvalTally {
    double loss_sum = 0.0;
    std::array<std::array<std::uint64_t, 4>, 4> confusion{};
};

EvalTally forward_tally(const CnnModel& model, const std::vector<IqWindow>& windows,
                        ParallelRunner& runner) {
    const std::size_t n = windows.size();
    const std::size_t chunks = std::min<std::size_t>(64, n);
    std::vector<EvalTally> partial(chunks);

    runner.run(chunks, [&](std::size_t c) {
        ForwardBuffers buffers(model.shape);
        const std::size_t begin = c * n / chunks;
        const std::size_t end = (c + 1) * n / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            const IqWindow& w = windows[i];
            if (!w.label) throw std::invalid_argument("train: unlabeled window");
            window_to_input(w, buffers.input.data());
            forward(model, buffers);
            const auto label = static_cast<std::size_t>(*w.label);
            partial[c].loss_sum += cross_entropy_from_logits(buffers.logits, label);
            partial[c].confusion[label][argmax_class(buffers.logits)]++;
        }
    });

    EvalTally total;
    for (const EvalTally& p : partial) {
        total.loss_sum += p.loss_sum;
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) total.confusion[a][b] += p.confusion[a][b];
    }
    return total;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw std::invalid_argument("train: beta1/beta2 must be in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("train: epsilon must be > 0");
    if (batch_size == 0) throw std::invalid_argument("train: batch_size must be >= 1");
}

void adam_step(std::span<double> params, std::span<const double> grads,
               std::span<double> first_moment, std::span<double> second_moment,
               std::uint64_t step, const TrainConfig& config) {
    if (params.size() != grads.size() || params.size() != first_moment.size() ||
        params.size() != second_moment.size())
        throw std::invalid_argument("adam_step: span sizes differ");
    if (step == 0) throw std::invalid_argument("adam_step: step index is 1-based");

    const double b1 = config.beta1, b2 = config.beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step));
    const double lr = config.learning_rate;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double gi = grads[i];
        first_moment[i] = b1 * first_moment[i] + (1.0 - b1) * gi;
        second_moment[i] = b2 * second_moment[i] + (1.0 - b2) * gi * gi;
        const double m_hat = first_moment[i] / bias1;
        const double v_hat = second_moment[i] / bias2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
}

std::vector<double> backward(const CnnModel& model, std::span<const IqWindow> batch) {
    if (batch.empty()) throw std::invalid_argument("backward: empty batch");
    std::vector<const IqWindow*> refs(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) refs[i] = &batch[i];

    ParallelRunner runner;
    BatchWorkspace ws(model.shape, model.param_count());
    std::vector<double> grads;
    batch_backward(model, refs, runner, ws, grads);
    return grads;
}

double mean_loss(const CnnModel& model, std::span<const IqWindow> windows) {
    if (windows.empty()) throw std::invalid_argument("mean_loss: no windows");
    double acc = 0.0;
    ForwardBuffers buffers(model.shape);
    for (const IqWindow& w : windows) {
        if (!w.label) throw std::invalid_argument("mean_loss: unlabeled window");
        window_to_input(w, buffers.input.data());
        forward(model, buffers);
        acc += cross_entropy_from_logits(buffers.logits, static_cast<std::size_t>(*w.label));
    }
    return acc / static_cast<double>(windows.size());
}

std::pair<CnnModel, TrainReport> train(const CnnModel& init, const DatasetSplit& split,
                                       const TrainConfig& config) {
    config.validate();
    init.shape.validate();
    if (split.train.windows.empty()) throw std::invalid_argument("train: empty train set");
    if (split.train.window_len != init.shape.window_len)
        throw std::invalid_argument("train: dataset window length does not match the model");

    const auto t_start = std::chrono::steady_clock::now();

    CnnModel model = init;
    const std::size_t n_params = model.param_count();
    AdamState state(n_params);
    ParallelRunner runner(config.threads);
    BatchWorkspace ws(model.shape, n_params);

    const std::vector<IqWindow>& data = split.train.windows;
    const std::size_t n = data.size();

    TrainReport report;
    report.parameter_count = n_params;
    report.initial_loss =
        forward_tally(model, data, runner).loss_sum / static_cast<double>(n);

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<const IqWindow*> batch_refs;
    std::vector<double> grads;
    std::uint64_t step = 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
            const std::size_t end = std::min(n, begin + config.batch_size);
            batch_refs.clear();
            for (std::size_t i = begin; i < end; ++i) batch_refs.push_back(&data[order[i]]);

            auto [batch_loss, batch_correct] =
                batch_backward(model, batch_refs, runner, ws, grads);
            loss_sum += batch_loss;
            correct += batch_correct;

            ++step;
            adam_step(model.params, grads, state.first_moment, state.second_moment, step,
                      config);
        }
        report.epoch_train_loss.push_back(loss_sum / static_cast<double>(n));
        report.epoch_train_accuracy.push_back(static_cast<double>(correct) /
                                              static_cast<double>(n));
    }

    report.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!split.test.windows.empty()) {
        const EvalTally tally = forward_tally(model, split.test.windows, runner);
        report.confusion = tally.confusion;
        report.test_loss = tally.loss_sum / static_cast<double>(split.test.windows.size());
        std::uint64_t diag = 0, total = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            std::uint64_t row = 0;
            for (std::size_t p = 0; p < 4; ++p) row += report.confusion[c][p];
            diag += report.confusion[c][c];
            total += row;
            report.per_class_accuracy[c] =
                row ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(row)
                    : 0.0;
        }
        report.test_accuracy = total ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
    }

    return {std::move(model), std::move(report)};
}

}  // namespace slris
