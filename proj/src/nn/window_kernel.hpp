#pragma once

// Single-window forward/backward shared by the serial and OpenMP kernels.

#include "powertwin/nn/network.hpp"

#include <span>
#include <vector>

namespace powertwin::nn::detail {

struct LayerCache {
    std::vector<double> gates;  ///< L x 4H, post-activation (i, f, g, o)
    std::vector<double> cell;   ///< L x H
    std::vector<double> tanh_c; ///< L x H
    std::vector<double> hidden; ///< L x H
};

/// Scratch buffers for one window; reusable across windows of the same network.
struct Workspace {
    std::vector<LayerCache> layers;
    std::vector<double> head_pre;  ///< head units, before ReLU
    std::vector<double> head_act;  ///< after ReLU
    std::vector<double> output;
    // backward scratch
    std::vector<double> d_hidden_above; ///< L x H, gradient w.r.t. the current layer's outputs
    std::vector<double> d_hidden_below; ///< L x H
    std::vector<double> d_gate;         ///< 4H
    std::vector<double> dh;
    std::vector<double> dc;
    std::vector<double> dh_next;
    std::vector<double> dc_next;
    std::vector<double> d_head;

    explicit Workspace(const ModelConfig& config);
};

/// Runs the LSTM stack and head; leaves activations in `ws` and returns ws.output.
std::span<const double> forward_window(const Network& net, std::span<const double> window, Workspace& ws);

/// Accumulates into `grad` the gradient for output error `d_output` of the
/// window last passed to forward_window.
void backward_window(const Network& net, std::span<const double> window, std::span<const double> d_output,
                     Workspace& ws, std::span<double> grad);

} // namespace powertwin::nn::detail
