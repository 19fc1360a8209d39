#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace powertwin::nn {

/// Architecture of one LSTM sequence-to-one regressor: stacked LSTM layers,
/// a ReLU fully connected layer and a linear output layer.
struct ModelConfig {
    std::size_t input_dim = 1;
    std::size_t hidden_units = 32;
    std::size_t lstm_layers = 1;
    std::size_t head_units = 32;
    std::size_t output_dim = 1;
    std::size_t window_len = 10;
    std::uint64_t seed = 0;
    /// Initial forget-gate bias; 0 gives the plain uniform initialisation.
    double forget_bias = 1.0;

    /// Throws ConfigError unless every count is >= 1 and output_dim is 1 or 2.
    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

/// EV models: one 32-unit LSTM layer, 32-unit head.
ModelConfig ev_model_config(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed);
/// ICEV models: two 64-unit LSTM layers, 64-unit head.
ModelConfig icev_model_config(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed);

struct TrainConfig {
    std::size_t epochs = 20;
    double base_lr = 1e-3;
    /// Explicit warm-up length; when unset it is floor(warmup_fraction * total steps).
    std::optional<std::size_t> warmup_steps;
    double warmup_fraction = 0.05;
    std::size_t batch_size = 64;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    /// 1 runs the serial reference kernels; more uses the OpenMP batch kernels.
    int threads = 1;

    void validate() const;
    std::size_t resolved_warmup(std::size_t total_steps) const;
    bool operator==(const TrainConfig&) const = default;
};

TrainConfig ev_train_config();
TrainConfig icev_train_config();

} // namespace powertwin::nn
