#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slris {

/// Dense row-major tensor of doubles. Shape is dynamic; ops validate it.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<std::size_t> shape_, std::vector<double> data_);
    static Tensor zeros(std::vector<std::size_t> shape_);

    std::size_t size() const { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }

    bool operator==(const Tensor&) const = default;
};

enum class Activation { Identity, Relu };

/// Valid (no padding) 1-D convolution.
///   input  (c_in, t_in), kernel (c_out, c_in, k), bias (c_out)
///   output (c_out, t_in - k + 1)
/// out[c,t] = act(bias[c] + sum_{i,tau} kernel[c,i,tau] * input[i,t+tau]).
/// Throws std::invalid_argument when t_in < k or shapes disagree.
Tensor conv1d_forward(const Tensor& input, const Tensor& kernel,
                      std::span<const double> bias, Activation activation);

/// act(W x + b) with W of shape (out, in).
std::vector<double> dense_forward(std::span<const double> input, const Tensor& weights,
                                  std::span<const double> bias, Activation activation);

/// Max-shifted softmax; components positive and summing to 1.
std::vector<double> softmax(std::span<const double> logits);

/// -ln(probs[label]); `probs` must come from softmax. Clamped away from
/// log(0) so extreme inputs stay finite.
double cross_entropy(std::span<const double> probs, std::size_t label);

/// Cross-entropy straight from logits via the fused log-sum-exp form;
/// numerically stable for any finite logits.
double cross_entropy_from_logits(std::span<const double> logits, std::size_t label);

namespace kernels {

// Unchecked hot-path primitives shared by the layer ops and the training
// loop. The time axis is innermost and contiguous so the loops vectorize;
// dot reductions carry an explicit simd annotation (fixed lane count per
// build, so results stay reproducible run to run).

/// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

/// y[i] += c * x[i]
void axpy(double* y, const double* x, double c, std::size_t n);

void conv1d_valid(const double* input, std::size_t c_in, std::size_t t_in,
                  const double* kernel, std::size_t c_out, std::size_t klen,
                  const double* bias, double* output, bool relu);

void dense(const double* input, std::size_t in_dim, const double* weights,
           std::size_t out_dim, const double* bias, double* output, bool relu);

void softmax_inplace(double* values, std::size_t n);

}  // namespace kernels
}  // namespace slris
