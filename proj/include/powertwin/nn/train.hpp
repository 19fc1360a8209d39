#pragma once

#include "powertwin/nn/config.hpp"
#include "powertwin/nn/network.hpp"

#include <vector>

namespace powertwin::nn {

/// Scaled windows (count x window_len x input_dim) and final-step targets
/// (count x output_dim), row-major.
struct WindowData {
    std::vector<double> inputs;
    std::vector<double> targets;
    std::size_t count = 0;

    /// Appends `other`; both must have the same window and target widths.
    void append(const WindowData& other);
};

/// Per-epoch mean squared error on the scaled targets.
struct LossHistory {
    std::vector<double> train;
    std::vector<double> validation; ///< empty when no validation data was given
};

struct TrainResult {
    Network network;
    LossHistory history;
};

/// Mini-batch Adam training with a cosine warm-up schedule over
/// epochs x ceil(count / batch_size) steps. Windows are reshuffled every epoch
/// from the model seed. Throws NumericError naming the (1-based) epoch when the loss
/// diverges, DimensionError when windows and targets disagree.
TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg, const WindowData& train_data,
                  const WindowData* validation = nullptr);

/// MSE of the network over every window of `data`.
double evaluate_mse(const Network& net, const WindowData& data, int threads = 1);

} // namespace powertwin::nn
