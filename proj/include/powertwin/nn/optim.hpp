#pragma once

#include "powertwin/nn/config.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace powertwin::nn {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step = 0;

    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam update in place. Throws DimensionError on a size mismatch.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamHyper& hyper = {});

/// Linear warm-up to base_lr, then cosine decay towards 0.
/// Throws ConfigError when total_steps <= warmup_steps or step >= total_steps.
double cosine_warmup_lr(std::size_t step, std::size_t total_steps, std::size_t warmup_steps, double base_lr);
double cosine_warmup_lr(std::size_t step, std::size_t total_steps, const TrainConfig& cfg);

} // namespace powertwin::nn
