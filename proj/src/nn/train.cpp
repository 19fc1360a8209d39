#include "powertwin/nn/train.hpp"

#include "powertwin/error.hpp"
#include "powertwin/nn/kernels.hpp"
#include "powertwin/nn/optim.hpp"
#include "powertwin/rng.hpp"

#include <cmath>
#include <numeric>

namespace powertwin::nn {

void WindowData::append(const WindowData& other)
{
    if (other.count == 0) {
        return;
    }
    if (count > 0 && (inputs.size() / count != other.inputs.size() / other.count ||
                      targets.size() / count != other.targets.size() / other.count)) {
        throw DimensionError("WindowData::append: window shapes differ");
    }
    inputs.insert(inputs.end(), other.inputs.begin(), other.inputs.end());
    targets.insert(targets.end(), other.targets.begin(), other.targets.end());
    count += other.count;
}

namespace {

void check_data(const ModelConfig& cfg, const WindowData& data, const char* what)
{
    if (data.inputs.size() != data.count * cfg.window_len * cfg.input_dim ||
        data.targets.size() != data.count * cfg.output_dim) {
        throw DimensionError(std::string(what) + " data: " + std::to_string(data.count) + " windows need " +
                             std::to_string(data.count * cfg.window_len * cfg.input_dim) + " inputs and " +
                             std::to_string(data.count * cfg.output_dim) + " targets, got " +
                             std::to_string(data.inputs.size()) + " and " + std::to_string(data.targets.size()));
    }
}

} // namespace

double evaluate_mse(const Network& net, const WindowData& data, int threads)
{
    check_data(net.config(), data, "evaluation");
    if (data.count == 0) {
        throw InputError("evaluate_mse: no windows");
    }
    const auto pred = threads > 1 ? predict_batch_parallel(net, data.inputs, data.count, threads)
                                  : predict_batch_serial(net, data.inputs, data.count);
    return mse_loss(pred, data.targets);
}

TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg, const WindowData& train_data,
                  const WindowData* validation)
{
    model_cfg.validate();
    train_cfg.validate();
    check_data(model_cfg, train_data, "training");
    if (validation) {
        check_data(model_cfg, *validation, "validation");
    }

    TrainResult result{Network::initialized(model_cfg), {}};
    if (train_cfg.epochs == 0) {
        return result;
    }
    if (train_data.count == 0) {
        throw InputError("train: no training windows");
    }

    const std::size_t batches_per_epoch = (train_data.count + train_cfg.batch_size - 1) / train_cfg.batch_size;
    const std::size_t total_steps = train_cfg.epochs * batches_per_epoch;
    const std::size_t warmup = train_cfg.resolved_warmup(total_steps);
    if (total_steps <= warmup) {
        throw ConfigError("train: " + std::to_string(total_steps) + " optimisation steps do not exceed the " +
                          std::to_string(warmup) + " warm-up steps");
    }

    Network& net = result.network;
    AdamState state(net.params().size());
    const AdamHyper hyper{train_cfg.adam_beta1, train_cfg.adam_beta2, train_cfg.adam_eps};
    rng::Engine engine(rng::derive_seed(model_cfg.seed, 1));
    std::vector<std::size_t> order(train_data.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const WindowBatch batch{train_data.inputs, train_data.targets, train_data.count};

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        rng::shuffle(order, engine);
        double weighted = 0.0;
        for (std::size_t b = 0; b < batches_per_epoch; ++b) {
            const std::size_t begin = b * train_cfg.batch_size;
            const std::size_t end = std::min(begin + train_cfg.batch_size, order.size());
            const std::span<const std::size_t> rows(order.data() + begin, end - begin);
            BatchGradient g;
            try {
                g = train_cfg.threads > 1 ? batch_gradient_parallel(net, batch, rows, train_cfg.threads, b)
                                          : batch_gradient_serial(net, batch, rows, b);
            } catch (const NumericError& e) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch + 1) + ": " + e.what());
            }
            const double lr = cosine_warmup_lr(step, total_steps, warmup, train_cfg.base_lr);
            adam_step(net.params(), g.gradient.values, state, lr, hyper);
            weighted += g.loss * static_cast<double>(end - begin);
            ++step;
        }
        result.history.train.push_back(weighted / static_cast<double>(train_data.count));
        if (validation && validation->count > 0) {
            const double v = evaluate_mse(net, *validation, train_cfg.threads);
            if (!std::isfinite(v)) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch + 1) + ": validation loss " +
                                   std::to_string(v));
            }
            result.history.validation.push_back(v);
        }
    }
    return result;
}

} // namespace powertwin::nn
