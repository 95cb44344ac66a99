#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "slris/signal.hpp"

namespace slris {

/// Architecture of the 4-class occupancy classifier:
///   input (2, L) -> conv(k1, F1 filters, ReLU) -> conv(k2, F2, ReLU)
///   -> flatten -> dense(H, ReLU) -> dense(4) -> softmax.
/// No pooling, dropout or normalization layers.
struct CnnShape {
    std::size_t window_len = 512;
    std::size_t conv1_filters = 16;
    std::size_t conv1_kernel = 5;
    std::size_t conv2_filters = 32;
    std::size_t conv2_kernel = 5;
    std::size_t hidden = 64;

    static constexpr std::size_t in_channels = 2;
    static constexpr std::size_t num_classes = 4;

    std::size_t conv1_out_len() const { return window_len - conv1_kernel + 1; }
    std::size_t conv2_out_len() const { return conv1_out_len() - conv2_kernel + 1; }
    std::size_t flat_len() const { return conv2_filters * conv2_out_len(); }

    /// Sizes of the eight parameter blocks, in storage order:
    /// conv1_w conv1_b conv2_w conv2_b dense1_w dense1_b out_w out_b.
    std::array<std::size_t, 8> block_sizes() const;
    std::size_t param_count() const;

    void validate() const;  // throws std::invalid_argument if layers cannot chain

    bool operator==(const CnnShape&) const = default;
};

/// Classifier weights in one contiguous vector (block layout per CnnShape),
/// which keeps the optimizer and checkpoint code trivial.
struct CnnModel {
    CnnShape shape;
    std::vector<double> params;

    static CnnModel zeros(const CnnShape& shape);
    /// He-uniform for the ReLU layers, U(+-sqrt(1/fan_in)) for the output
    /// layer, zero biases.
    static CnnModel random_init(const CnnShape& shape, std::uint64_t seed);

    std::size_t param_count() const { return params.size(); }

    std::span<double> block(std::size_t i);
    std::span<const double> block(std::size_t i) const;

    std::span<const double> conv1_w() const { return block(0); }
    std::span<const double> conv1_b() const { return block(1); }
    std::span<const double> conv2_w() const { return block(2); }
    std::span<const double> conv2_b() const { return block(3); }
    std::span<const double> dense1_w() const { return block(4); }
    std::span<const double> dense1_b() const { return block(5); }
    std::span<const double> out_w() const { return block(6); }
    std::span<const double> out_b() const { return block(7); }
};

/// Scratch space for one forward pass; reusable across samples.
struct ForwardBuffers {
    std::vector<double> input;      // (2, L)
    std::vector<double> conv1_out;  // (F1, T1), post-ReLU
    std::vector<double> conv2_out;  // (F2, T2), post-ReLU
    std::vector<double> hidden;     // (H), post-ReLU
    std::array<double, 4> logits{};

    explicit ForwardBuffers(const CnnShape& shape);
};

/// Channel 0 = I, channel 1 = Q; `out` must hold 2 * window length doubles.
void window_to_input(const IqWindow& window, double* out);

/// Forward pass over prepared buffers.input, filling all activations.
void forward(const CnnModel& model, ForwardBuffers& buffers);

/// Softmax posterior over {Idle, DOnly, IOnly, Both}. Throws if the window
/// length does not match the model.
std::array<double, 4> predict(const CnnModel& model, const IqWindow& window);

/// Index of the largest posterior entry; ties resolve to the lowest index.
std::size_t argmax_class(std::span<const double> posterior);

/// .rism: "RISM" magic, u16 version, six u32 shape fields, then the
/// parameter vector as little-endian f64 in block order.
void save_model(const CnnModel& model, const std::filesystem::path& path);
CnnModel load_model(const std::filesystem::path& path);

inline constexpr std::uint16_t kModelFormatVersion = 1;

}  // namespace slris
