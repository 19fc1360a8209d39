#include "powertwin/nn/kernels.hpp"

#include "powertwin/error.hpp"
#include "window_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <omp.h>

namespace powertwin::nn {

namespace {

void check_batch(const Network& net, const WindowBatch& batch, std::span<const std::size_t> rows)
{
    const ModelConfig& cfg = net.config();
    const std::size_t per_window = cfg.window_len * cfg.input_dim;
    if (batch.inputs.size() != batch.count * per_window) {
        throw DimensionError("batch inputs have " + std::to_string(batch.inputs.size()) + " values, expected " +
                             std::to_string(batch.count) + " x " + std::to_string(cfg.window_len) + " x " +
                             std::to_string(cfg.input_dim));
    }
    if (batch.targets.size() != batch.count * cfg.output_dim) {
        throw DimensionError("batch targets have " + std::to_string(batch.targets.size()) + " values, expected " +
                             std::to_string(batch.count) + " x " + std::to_string(cfg.output_dim));
    }
    for (std::size_t r : rows) {
        if (r >= batch.count) {
            throw DimensionError("batch row " + std::to_string(r) + " out of range");
        }
    }
}

std::vector<std::size_t> resolve_rows(const WindowBatch& batch, std::span<const std::size_t> rows)
{
    if (!rows.empty()) {
        return {rows.begin(), rows.end()};
    }
    std::vector<std::size_t> all(batch.count);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
}

// Accumulates loss-sum and un-normalised gradient of rows[begin, end) into grad.
double accumulate_range(const Network& net, const WindowBatch& batch, const std::vector<std::size_t>& rows,
                        std::size_t begin, std::size_t end, double scale, detail::Workspace& ws,
                        std::span<double> grad)
{
    const ModelConfig& cfg = net.config();
    const std::size_t per_window = cfg.window_len * cfg.input_dim;
    std::vector<double> d_out(cfg.output_dim);
    double loss_sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const std::size_t r = rows[k];
        const auto window = batch.inputs.subspan(r * per_window, per_window);
        const auto target = batch.targets.subspan(r * cfg.output_dim, cfg.output_dim);
        const auto out = detail::forward_window(net, window, ws);
        for (std::size_t o = 0; o < cfg.output_dim; ++o) {
            const double diff = out[o] - target[o];
            loss_sum += diff * diff;
            d_out[o] = 2.0 * diff * scale;
        }
        detail::backward_window(net, window, d_out, ws, grad);
    }
    return loss_sum;
}

void check_finite(double loss, std::size_t batch_id)
{
    if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss in batch " + std::to_string(batch_id));
    }
}

} // namespace

BatchGradient batch_gradient_serial(const Network& net, const WindowBatch& batch, std::span<const std::size_t> rows,
                                    std::size_t batch_id)
{
    check_batch(net, batch, rows);
    const auto order = resolve_rows(batch, rows);
    if (order.empty()) {
        throw DimensionError("batch_gradient: empty batch");
    }
    const double elements = static_cast<double>(order.size() * net.config().output_dim);
    BatchGradient result;
    result.gradient.values.assign(net.params().size(), 0.0);
    detail::Workspace ws(net.config());
    const double loss_sum =
        accumulate_range(net, batch, order, 0, order.size(), 1.0 / elements, ws, result.gradient.values);
    result.loss = loss_sum / elements;
    check_finite(result.loss, batch_id);
    return result;
}

BatchGradient batch_gradient_parallel(const Network& net, const WindowBatch& batch, std::span<const std::size_t> rows,
                                      int threads, std::size_t batch_id)
{
    if (threads < 1) {
        throw ConfigError("threads must be >= 1");
    }
    check_batch(net, batch, rows);
    const auto order = resolve_rows(batch, rows);
    if (order.empty()) {
        throw DimensionError("batch_gradient: empty batch");
    }
    const double elements = static_cast<double>(order.size() * net.config().output_dim);
    const std::size_t n_params = net.params().size();
    const auto nt = static_cast<std::size_t>(threads);
    std::vector<std::vector<double>> grads(nt);
    std::vector<double> losses(nt, 0.0);

#pragma omp parallel num_threads(threads)
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        const auto team = static_cast<std::size_t>(omp_get_num_threads());
        // Chunk c always covers the same slice of `order`, whatever the team size.
        for (std::size_t c = tid; c < nt; c += team) {
            const std::size_t begin = order.size() * c / nt;
            const std::size_t end = order.size() * (c + 1) / nt;
            grads[c].assign(n_params, 0.0);
            if (begin == end) {
                continue;
            }
            detail::Workspace ws(net.config());
            losses[c] = accumulate_range(net, batch, order, begin, end, 1.0 / elements, ws, grads[c]);
        }
    }

    BatchGradient result;
    result.gradient.values = std::move(grads[0]);
    double loss_sum = losses[0];
    for (std::size_t c = 1; c < nt; ++c) {
        loss_sum += losses[c];
        for (std::size_t i = 0; i < n_params; ++i) {
            result.gradient.values[i] += grads[c][i];
        }
    }
    result.loss = loss_sum / elements;
    check_finite(result.loss, batch_id);
    return result;
}

std::vector<double> predict_batch_serial(const Network& net, std::span<const double> inputs, std::size_t count)
{
    const ModelConfig& cfg = net.config();
    const std::size_t per_window = cfg.window_len * cfg.input_dim;
    if (inputs.size() != count * per_window) {
        throw DimensionError("predict_batch: inputs have " + std::to_string(inputs.size()) + " values, expected " +
                             std::to_string(count * per_window));
    }
    std::vector<double> out(count * cfg.output_dim);
    detail::Workspace ws(cfg);
    for (std::size_t r = 0; r < count; ++r) {
        const auto y = detail::forward_window(net, inputs.subspan(r * per_window, per_window), ws);
        std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(r * cfg.output_dim));
    }
    return out;
}

std::vector<double> predict_batch_parallel(const Network& net, std::span<const double> inputs, std::size_t count,
                                           int threads)
{
    if (threads < 1) {
        throw ConfigError("threads must be >= 1");
    }
    const ModelConfig& cfg = net.config();
    const std::size_t per_window = cfg.window_len * cfg.input_dim;
    if (inputs.size() != count * per_window) {
        throw DimensionError("predict_batch: inputs have " + std::to_string(inputs.size()) + " values, expected " +
                             std::to_string(count * per_window));
    }
    std::vector<double> out(count * cfg.output_dim);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel num_threads(threads)
    {
        detail::Workspace ws(cfg);
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < n; ++r) {
            const auto row = static_cast<std::size_t>(r);
            const auto y = detail::forward_window(net, inputs.subspan(row * per_window, per_window), ws);
            std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(row * cfg.output_dim));
        }
    }
    return out;
}

GradientBundle backward(const Network& net, const WindowBatch& batch)
{
    return batch_gradient_serial(net, batch).gradient;
}

} // namespace powertwin::nn
