#include "powertwin/nn/optim.hpp"

#include "powertwin/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace powertwin::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamHyper& hyper)
{
    if (grads.size() != params.size()) {
        throw DimensionError("adam_step: " + std::to_string(grads.size()) + " gradients for " +
                             std::to_string(params.size()) + " parameters");
    }
    if (state.m.empty() && state.v.empty() && state.step == 0) {
        state = AdamState(params.size());
    }
    if (state.m.size() != params.size() || state.v.size() != params.size()) {
        throw DimensionError("adam_step: optimiser state does not match the parameter count");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(hyper.beta1, t);
    const double c2 = 1.0 - std::pow(hyper.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
    }
}

double cosine_warmup_lr(std::size_t step, std::size_t total_steps, std::size_t warmup_steps, double base_lr)
{
    if (total_steps <= warmup_steps) {
        throw ConfigError("cosine_warmup_lr: total_steps (" + std::to_string(total_steps) +
                          ") must exceed warmup_steps (" + std::to_string(warmup_steps) + ")");
    }
    if (step >= total_steps) {
        throw ConfigError("cosine_warmup_lr: step " + std::to_string(step) + " outside [0, " +
                          std::to_string(total_steps) + ")");
    }
    if (step < warmup_steps) {
        return base_lr * static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
    }
    const double progress =
        static_cast<double>(step - warmup_steps) / static_cast<double>(total_steps - warmup_steps);
    return base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

double cosine_warmup_lr(std::size_t step, std::size_t total_steps, const TrainConfig& cfg)
{
    return cosine_warmup_lr(step, total_steps, cfg.resolved_warmup(total_steps), cfg.base_lr);
}

} // namespace powertwin::nn
