#pragma once

#include "powertwin/nn/network.hpp"

#include <span>
#include <vector>

namespace powertwin::nn {

/// Windows and sequence-to-one targets, both row-major.
struct WindowBatch {
    std::span<const double> inputs;  ///< count x window_len x input_dim
    std::span<const double> targets; ///< count x output_dim
    std::size_t count = 0;
};

struct BatchGradient {
    double loss = 0.0; ///< MSE over every output element of the selected windows
    GradientBundle gradient;
};

// Serial reference kernels. Windows are accumulated in the order given by
// `rows` (all windows in index order when `rows` is empty).

BatchGradient batch_gradient_serial(const Network& net, const WindowBatch& batch, std::span<const std::size_t> rows = {},
                                    std::size_t batch_id = 0);
std::vector<double> predict_batch_serial(const Network& net, std::span<const double> inputs, std::size_t count);

// OpenMP data-parallel kernels. Each thread accumulates a contiguous chunk of
// windows into its own buffer; buffers are summed in thread order, so results
// are reproducible for a fixed thread count and bitwise equal to the serial
// kernels with one thread. Prediction is bitwise equal for any thread count.

BatchGradient batch_gradient_parallel(const Network& net, const WindowBatch& batch, std::span<const std::size_t> rows,
                                      int threads, std::size_t batch_id = 0);
std::vector<double> predict_batch_parallel(const Network& net, std::span<const double> inputs, std::size_t count,
                                           int threads);

/// Exact gradient of the batch MSE by backpropagation through time over the
/// whole window. Throws NumericError when the loss is not finite.
GradientBundle backward(const Network& net, const WindowBatch& batch);

} // namespace powertwin::nn
