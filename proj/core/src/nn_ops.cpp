#include "slris/nn_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slris {

Tensor::Tensor(std::vector<std::size_t> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
    std::size_t expected = 1;
    for (std::size_t d : shape) expected *= d;
    if (expected != data.size())
        throw std::invalid_argument("Tensor: data length does not match shape");
}

Tensor Tensor::zeros(std::vector<std::size_t> shape_) {
    std::size_t n = 1;
    for (std::size_t d : shape_) n *= d;
    return Tensor(std::move(shape_), std::vector<double>(n, 0.0));
}

namespace kernels {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double* y, const double* x, double c, std::size_t n) {
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

void conv1d_valid(const double* input, std::size_t c_in, std::size_t t_in,
                  const double* kernel, std::size_t c_out, std::size_t klen,
                  const double* bias, double* output, bool relu) {
    const std::size_t t_out = t_in - klen + 1;
    for (std::size_t co = 0; co < c_out; ++co) {
        double* row = output + co * t_out;
        std::fill(row, row + t_out, bias[co]);
        for (std::size_t ci = 0; ci < c_in; ++ci) {
            const double* x = input + ci * t_in;
            const double* w = kernel + (co * c_in + ci) * klen;
            for (std::size_t tau = 0; tau < klen; ++tau) axpy(row, x + tau, w[tau], t_out);
        }
        if (relu)
            for (std::size_t t = 0; t < t_out; ++t) row[t] = std::max(row[t], 0.0);
    }
}

void dense(const double* input, std::size_t in_dim, const double* weights,
           std::size_t out_dim, const double* bias, double* output, bool relu) {
    for (std::size_t o = 0; o < out_dim; ++o) {
        const double acc = bias[o] + dot(weights + o * in_dim, input, in_dim);
        output[o] = relu ? std::max(acc, 0.0) : acc;
    }
}

void softmax_inplace(double* values, std::size_t n) {
    const double peak = *std::max_element(values, values + n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = std::exp(values[i] - peak);
        sum += values[i];
    }
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < n; ++i) values[i] *= inv;
}

}  // namespace kernels

Tensor conv1d_forward(const Tensor& input, const Tensor& kernel,
                      std::span<const double> bias, Activation activation) {
    if (input.shape.size() != 2) throw std::invalid_argument("conv1d: input must be (c_in, t)");
    if (kernel.shape.size() != 3)
        throw std::invalid_argument("conv1d: kernel must be (c_out, c_in, k)");
    const std::size_t c_in = input.dim(0), t_in = input.dim(1);
    const std::size_t c_out = kernel.dim(0), klen = kernel.dim(2);
    if (kernel.dim(1) != c_in)
        throw std::invalid_argument("conv1d: kernel input-channel count mismatch");
    if (bias.size() != c_out) throw std::invalid_argument("conv1d: bias length mismatch");
    if (t_in < klen) throw std::invalid_argument("conv1d: input shorter than kernel");

    Tensor out = Tensor::zeros({c_out, t_in - klen + 1});
    kernels::conv1d_valid(input.data.data(), c_in, t_in, kernel.data.data(), c_out, klen,
                          bias.data(), out.data.data(), activation == Activation::Relu);
    return out;
}

std::vector<double> dense_forward(std::span<const double> input, const Tensor& weights,
                                  std::span<const double> bias, Activation activation) {
    if (weights.shape.size() != 2) throw std::invalid_argument("dense: weights must be (out, in)");
    const std::size_t out_dim = weights.dim(0), in_dim = weights.dim(1);
    if (input.size() != in_dim) throw std::invalid_argument("dense: input length mismatch");
    if (bias.size() != out_dim) throw std::invalid_argument("dense: bias length mismatch");

    std::vector<double> out(out_dim);
    kernels::dense(input.data(), in_dim, weights.data.data(), out_dim, bias.data(), out.data(),
                   activation == Activation::Relu);
    return out;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) throw std::invalid_argument("softmax: empty input");
    std::vector<double> out(logits.begin(), logits.end());
    kernels::softmax_inplace(out.data(), out.size());
    return out;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) throw std::invalid_argument("cross_entropy: label out of range");
    return -std::log(std::max(probs[label], 1e-300));
}

double cross_entropy_from_logits(std::span<const double> logits, std::size_t label) {
    if (label >= logits.size())
        throw std::invalid_argument("cross_entropy_from_logits: label out of range");
    const double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - peak);
    return peak + std::log(sum) - logits[label];
}

}  // namespace slris
