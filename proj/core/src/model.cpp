#include "slris/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "slris/io.hpp"
#include "slris/nn_ops.hpp"

namespace slris {

std::array<std::size_t, 8> CnnShape::block_sizes() const {
    return {
        conv1_filters * in_channels * conv1_kernel,  // conv1_w
        conv1_filters,                               // conv1_b
        conv2_filters * conv1_filters * conv2_kernel,
        conv2_filters,
        hidden * flat_len(),
        hidden,
        num_classes * hidden,
        num_classes,
    };
}

std::size_t CnnShape::param_count() const {
    const auto sizes = block_sizes();
    return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

void CnnShape::validate() const {
    if (conv1_filters == 0 || conv2_filters == 0 || hidden == 0)
        throw std::invalid_argument("model shape: zero-sized layer");
    if (conv1_kernel == 0 || conv2_kernel == 0)
        throw std::invalid_argument("model shape: zero kernel");
    if (window_len < conv1_kernel || conv1_out_len() < conv2_kernel)
        throw std::invalid_argument("model shape: window too short for the conv stack");
}

CnnModel CnnModel::zeros(const CnnShape& shape) {
    shape.validate();
    return CnnModel{shape, std::vector<double>(shape.param_count(), 0.0)};
}

CnnModel CnnModel::random_init(const CnnShape& shape, std::uint64_t seed) {
    CnnModel model = zeros(shape);
    Rng rng(seed);

    auto fill_uniform = [&rng](std::span<double> block, double limit) {
        for (double& v : block) v = rng.uniform(-limit, limit);
    };

    // He-uniform: sqrt(6 / fan_in) for the ReLU layers.
    fill_uniform(model.block(0),
                 std::sqrt(6.0 / static_cast<double>(CnnShape::in_channels * shape.conv1_kernel)));
    fill_uniform(model.block(2),
                 std::sqrt(6.0 / static_cast<double>(shape.conv1_filters * shape.conv2_kernel)));
    fill_uniform(model.block(4), std::sqrt(6.0 / static_cast<double>(shape.flat_len())));
    fill_uniform(model.block(6), std::sqrt(1.0 / static_cast<double>(shape.hidden)));
    return model;
}

std::span<double> CnnModel::block(std::size_t i) {
    const auto sizes = shape.block_sizes();
    std::size_t offset = 0;
    for (std::size_t b = 0; b < i; ++b) offset += sizes[b];
    return {params.data() + offset, sizes[i]};
}

std::span<const double> CnnModel::block(std::size_t i) const {
    const auto sizes = shape.block_sizes();
    std::size_t offset = 0;
    for (std::size_t b = 0; b < i; ++b) offset += sizes[b];
    return {params.data() + offset, sizes[i]};
}

ForwardBuffers::ForwardBuffers(const CnnShape& shape)
    : input(CnnShape::in_channels * shape.window_len),
      conv1_out(shape.conv1_filters * shape.conv1_out_len()),
      conv2_out(shape.conv2_filters * shape.conv2_out_len()),
      hidden(shape.hidden) {}

void window_to_input(const IqWindow& window, double* out) {
    const std::size_t len = window.samples.size();
    for (std::size_t t = 0; t < len; ++t) {
        out[t] = window.samples[t].real();
        out[len + t] = window.samples[t].imag();
    }
}

void forward(const CnnModel& model, ForwardBuffers& b) {
    const CnnShape& s = model.shape;
    kernels::conv1d_valid(b.input.data(), CnnShape::in_channels, s.window_len,
                          model.conv1_w().data(), s.conv1_filters, s.conv1_kernel,
                          model.conv1_b().data(), b.conv1_out.data(), true);
    kernels::conv1d_valid(b.conv1_out.data(), s.conv1_filters, s.conv1_out_len(),
                          model.conv2_w().data(), s.conv2_filters, s.conv2_kernel,
                          model.conv2_b().data(), b.conv2_out.data(), true);
    kernels::dense(b.conv2_out.data(), s.flat_len(), model.dense1_w().data(), s.hidden,
                   model.dense1_b().data(), b.hidden.data(), true);
    kernels::dense(b.hidden.data(), s.hidden, model.out_w().data(), CnnShape::num_classes,
                   model.out_b().data(), b.logits.data(), false);
}

std::array<double, 4> predict(const CnnModel& model, const IqWindow& window) {
    if (window.length() != model.shape.window_len)
        throw std::invalid_argument("predict: window length does not match the model");
    ForwardBuffers buffers(model.shape);
    window_to_input(window, buffers.input.data());
    forward(model, buffers);
    std::array<double, 4> posterior = buffers.logits;
    kernels::softmax_inplace(posterior.data(), posterior.size());
    return posterior;
}

std::size_t argmax_class(std::span<const double> posterior) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < posterior.size(); ++i)
        if (posterior[i] > posterior[best]) best = i;
    return best;
}

void save_model(const CnnModel& model, const std::filesystem::path& path) {
    std::ofstream os = io::open_output(path);
    os.write("RISM", 4);
    io::write_u16(os, kModelFormatVersion);
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.window_len));
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.conv1_filters));
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.conv1_kernel));
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.conv2_filters));
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.conv2_kernel));
    io::write_u32(os, static_cast<std::uint32_t>(model.shape.hidden));
    for (double v : model.params) io::write_f64(os, v);
    if (!os) throw std::runtime_error("save_model: write failed: " + path.string());
}

CnnModel load_model(const std::filesystem::path& path) {
    std::ifstream is = io::open_input(path);
    io::expect_magic(is, "RISM", "model");
    const std::uint16_t version = io::read_u16(is);
    if (version != kModelFormatVersion)
        throw FormatError(FormatError::Kind::BadVersion,
                          "model: unsupported format version " + std::to_string(version));
    CnnShape shape;
    shape.window_len = io::read_u32(is);
    shape.conv1_filters = io::read_u32(is);
    shape.conv1_kernel = io::read_u32(is);
    shape.conv2_filters = io::read_u32(is);
    shape.conv2_kernel = io::read_u32(is);
    shape.hidden = io::read_u32(is);
    try {
        shape.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(FormatError::Kind::Corrupt, std::string("model: ") + e.what());
    }

    CnnModel model = CnnModel::zeros(shape);
    for (double& v : model.params) v = io::read_f64(is);
    if (is.peek() != std::ifstream::traits_type::eof())
        throw FormatError(FormatError::Kind::Corrupt,
                          "model: payload longer than the shape header implies");
    return model;
}

}  // namespace slris
