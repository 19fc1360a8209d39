#pragma once

#include "powertwin/nn/config.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace powertwin::nn {

/// A named row-major matrix (or vector, cols == 1) inside the flat parameter buffer.
struct ParamBlock {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t size() const { return rows * cols; }
};

/// Offsets of every parameter block for a ModelConfig.
///
/// Per LSTM layer: input weights [4H x in], recurrent weights [4H x H] and bias
/// [4H], gate rows ordered input, forget, cell, output. Head: W1 [head x H],
/// b1, W2 [out x head], b2.
class ParameterLayout {
public:
    struct Lstm {
        std::size_t input_dim = 0;
        std::size_t hidden = 0;
        std::size_t w_input = 0;
        std::size_t w_recurrent = 0;
        std::size_t bias = 0;
    };
    struct Head {
        std::size_t w1 = 0;
        std::size_t b1 = 0;
        std::size_t w2 = 0;
        std::size_t b2 = 0;
    };

    explicit ParameterLayout(const ModelConfig& config);

    const std::vector<ParamBlock>& blocks() const { return blocks_; }
    const Lstm& lstm(std::size_t layer) const { return lstm_[layer]; }
    const Head& head() const { return head_; }
    std::size_t size() const { return size_; }

private:
    std::vector<ParamBlock> blocks_;
    std::vector<Lstm> lstm_;
    Head head_;
    std::size_t size_ = 0;
};

/// Parameters and configuration of one sequence regressor.
class Network {
public:
    /// All parameters zero.
    explicit Network(const ModelConfig& config);

    /// Seeded uniform initialisation in [-k, k] with k = 1/sqrt(hidden) for the
    /// LSTM and head W1, k = 1/sqrt(head_units) for W2;
    /// forget-gate biases set to config.forget_bias.
    static Network initialized(const ModelConfig& config);

    const ModelConfig& config() const { return config_; }
    const ParameterLayout& layout() const { return layout_; }
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    std::span<double> block(std::string_view name);
    std::span<const double> block(std::string_view name) const;

    bool operator==(const Network& other) const
    {
        return config_ == other.config_ && params_ == other.params_;
    }

private:
    ModelConfig config_;
    ParameterLayout layout_;
    std::vector<double> params_;
};

/// Gradient with the same block layout as a Network's parameters.
struct GradientBundle {
    std::vector<double> values;
};

struct LstmOutput {
    std::vector<double> hidden_sequence; ///< window_len x hidden of the top layer
    std::vector<double> final_hidden;    ///< hidden of the top layer at the last step
};

/// LSTM stack over one window (window_len x input_dim, row-major) from zero
/// initial state. Throws DimensionError on a size mismatch.
LstmOutput lstm_forward(const Network& net, std::span<const double> window);

/// Linear -> ReLU -> linear on a final hidden state.
std::vector<double> head_forward(const Network& net, std::span<const double> hidden);

/// head_forward(lstm_forward(window).final_hidden).
std::vector<double> predict(const Network& net, std::span<const double> window);

/// Mean of squared differences over all elements.
double mse_loss(std::span<const double> pred, std::span<const double> target);

} // namespace powertwin::nn
