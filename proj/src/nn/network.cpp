#include "powertwin/nn/network.hpp"

#include "powertwin/error.hpp"
#include "powertwin/rng.hpp"
#include "window_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace powertwin::nn {

void ModelConfig::validate() const
{
    if (input_dim < 1 || hidden_units < 1 || lstm_layers < 1 || head_units < 1 || window_len < 1) {
        throw ConfigError("model config: every dimension must be >= 1");
    }
    if (output_dim != 1 && output_dim != 2) {
        throw ConfigError("model config: output_dim must be 1 or 2, got " + std::to_string(output_dim));
    }
}

ModelConfig ev_model_config(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed)
{
    ModelConfig c;
    c.input_dim = input_dim;
    c.hidden_units = 32;
    c.lstm_layers = 1;
    c.head_units = 32;
    c.output_dim = output_dim;
    c.window_len = 10;
    c.seed = seed;
    return c;
}

ModelConfig icev_model_config(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed)
{
    ModelConfig c = ev_model_config(input_dim, output_dim, seed);
    c.hidden_units = 64;
    c.lstm_layers = 2;
    c.head_units = 64;
    return c;
}

void TrainConfig::validate() const
{
    if (!(base_lr > 0.0) || batch_size < 1 || threads < 1) {
        throw ConfigError("train config: base_lr, batch_size and threads must be positive");
    }
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0 && adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
        throw ConfigError("train config: Adam betas must lie in (0, 1)");
    }
    if (!(adam_eps > 0.0)) {
        throw ConfigError("train config: Adam epsilon must be positive");
    }
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
        throw ConfigError("train config: warmup_fraction must lie in [0, 1)");
    }
}

std::size_t TrainConfig::resolved_warmup(std::size_t total_steps) const
{
    if (warmup_steps) {
        return *warmup_steps;
    }
    return static_cast<std::size_t>(std::floor(warmup_fraction * static_cast<double>(total_steps)));
}

TrainConfig ev_train_config()
{
    TrainConfig t;
    t.epochs = 20;
    return t;
}

TrainConfig icev_train_config()
{
    TrainConfig t;
    t.epochs = 50;
    return t;
}

// Layout -------------------------------------------------------------------------

ParameterLayout::ParameterLayout(const ModelConfig& config)
{
    config.validate();
    const auto add = [this](std::string name, std::size_t rows, std::size_t cols) {
        blocks_.push_back({std::move(name), size_, rows, cols});
        size_ += rows * cols;
        return blocks_.back().offset;
    };
    const std::size_t h = config.hidden_units;
    for (std::size_t l = 0; l < config.lstm_layers; ++l) {
        Lstm layer;
        layer.input_dim = l == 0 ? config.input_dim : h;
        layer.hidden = h;
        const std::string prefix = "lstm" + std::to_string(l) + ".";
        layer.w_input = add(prefix + "w_input", 4 * h, layer.input_dim);
        layer.w_recurrent = add(prefix + "w_recurrent", 4 * h, h);
        layer.bias = add(prefix + "bias", 4 * h, 1);
        lstm_.push_back(layer);
    }
    head_.w1 = add("head.w1", config.head_units, h);
    head_.b1 = add("head.b1", config.head_units, 1);
    head_.w2 = add("head.w2", config.output_dim, config.head_units);
    head_.b2 = add("head.b2", config.output_dim, 1);
}

// Network ------------------------------------------------------------------------

Network::Network(const ModelConfig& config) : config_(config), layout_(config), params_(layout_.size(), 0.0) {}

Network Network::initialized(const ModelConfig& config)
{
    Network net(config);
    rng::Engine engine(rng::derive_seed(config.seed, 0));
    const auto fill = [&](std::size_t offset, std::size_t count, double bound) {
        for (std::size_t i = 0; i < count; ++i) {
            net.params_[offset + i] = rng::uniform(engine, -bound, bound);
        }
    };
    const double h = static_cast<double>(config.hidden_units);
    for (std::size_t l = 0; l < config.lstm_layers; ++l) {
        const auto& layer = net.layout_.lstm(l);
        const double bound = 1.0 / std::sqrt(h);
        fill(layer.w_input, 4 * layer.hidden * layer.input_dim, bound);
        fill(layer.w_recurrent, 4 * layer.hidden * layer.hidden, bound);
        fill(layer.bias, 4 * layer.hidden, bound);
        for (std::size_t j = 0; j < layer.hidden; ++j) {
            net.params_[layer.bias + layer.hidden + j] = config.forget_bias;
        }
    }
    const auto& head = net.layout_.head();
    const double b1 = 1.0 / std::sqrt(h);
    const double b2 = 1.0 / std::sqrt(static_cast<double>(config.head_units));
    fill(head.w1, config.head_units * config.hidden_units, b1);
    fill(head.b1, config.head_units, b1);
    fill(head.w2, config.output_dim * config.head_units, b2);
    fill(head.b2, config.output_dim, b2);
    return net;
}

std::span<double> Network::block(std::string_view name)
{
    for (const auto& b : layout_.blocks()) {
        if (b.name == name) {
            return std::span<double>(params_).subspan(b.offset, b.size());
        }
    }
    throw DimensionError("no parameter block named '" + std::string(name) + "'");
}

std::span<const double> Network::block(std::string_view name) const
{
    return const_cast<Network&>(*this).block(name);
}

// Single-window kernels -----------------------------------------------------------

namespace detail {

Workspace::Workspace(const ModelConfig& config)
{
    const std::size_t L = config.window_len;
    const std::size_t H = config.hidden_units;
    layers.resize(config.lstm_layers);
    for (auto& c : layers) {
        c.gates.assign(L * 4 * H, 0.0);
        c.cell.assign(L * H, 0.0);
        c.tanh_c.assign(L * H, 0.0);
        c.hidden.assign(L * H, 0.0);
    }
    head_pre.assign(config.head_units, 0.0);
    head_act.assign(config.head_units, 0.0);
    output.assign(config.output_dim, 0.0);
    d_hidden_above.assign(L * H, 0.0);
    d_hidden_below.assign(L * H, 0.0);
    d_gate.assign(4 * H, 0.0);
    dh.assign(H, 0.0);
    dc.assign(H, 0.0);
    dh_next.assign(H, 0.0);
    dc_next.assign(H, 0.0);
    d_head.assign(config.head_units, 0.0);
}

static inline double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

std::span<const double> forward_window(const Network& net, std::span<const double> window, Workspace& ws)
{
    const ModelConfig& cfg = net.config();
    const std::size_t L = cfg.window_len;
    const std::size_t H = cfg.hidden_units;
    if (window.size() != L * cfg.input_dim) {
        throw DimensionError("window has " + std::to_string(window.size()) + " values, expected " +
                             std::to_string(L * cfg.input_dim) + " (window_len x input_dim)");
    }
    const double* p = net.params().data();

    for (std::size_t l = 0; l < cfg.lstm_layers; ++l) {
        const auto& layer = net.layout().lstm(l);
        const std::size_t in = layer.input_dim;
        const double* inputs = l == 0 ? window.data() : ws.layers[l - 1].hidden.data();
        auto& cache = ws.layers[l];
        const double* w_in = p + layer.w_input;
        const double* w_rec = p + layer.w_recurrent;
        const double* bias = p + layer.bias;

        for (std::size_t t = 0; t < L; ++t) {
            const double* x = inputs + t * in;
            const double* h_prev = t > 0 ? cache.hidden.data() + (t - 1) * H : nullptr;
            const double* c_prev = t > 0 ? cache.cell.data() + (t - 1) * H : nullptr;
            double* a = cache.gates.data() + t * 4 * H;
            for (std::size_t r = 0; r < 4 * H; ++r) {
                double sum = bias[r];
                const double* wi = w_in + r * in;
                for (std::size_t k = 0; k < in; ++k) {
                    sum += wi[k] * x[k];
                }
                if (h_prev) {
                    const double* wr = w_rec + r * H;
                    for (std::size_t k = 0; k < H; ++k) {
                        sum += wr[k] * h_prev[k];
                    }
                }
                a[r] = sum;
            }
            double* c = cache.cell.data() + t * H;
            double* tc = cache.tanh_c.data() + t * H;
            double* h = cache.hidden.data() + t * H;
            for (std::size_t j = 0; j < H; ++j) {
                const double ig = sigmoid(a[j]);
                const double fg = sigmoid(a[H + j]);
                const double gg = std::tanh(a[2 * H + j]);
                const double og = sigmoid(a[3 * H + j]);
                a[j] = ig;
                a[H + j] = fg;
                a[2 * H + j] = gg;
                a[3 * H + j] = og;
                c[j] = ig * gg + (c_prev ? fg * c_prev[j] : 0.0);
                tc[j] = std::tanh(c[j]);
                h[j] = og * tc[j];
            }
        }
    }

    const auto& head = net.layout().head();
    const double* h_final = ws.layers.back().hidden.data() + (L - 1) * H;
    for (std::size_t u = 0; u < cfg.head_units; ++u) {
        double sum = p[head.b1 + u];
        const double* w = p + head.w1 + u * H;
        for (std::size_t k = 0; k < H; ++k) {
            sum += w[k] * h_final[k];
        }
        ws.head_pre[u] = sum;
        ws.head_act[u] = sum > 0.0 ? sum : 0.0;
    }
    for (std::size_t o = 0; o < cfg.output_dim; ++o) {
        double sum = p[head.b2 + o];
        const double* w = p + head.w2 + o * cfg.head_units;
        for (std::size_t u = 0; u < cfg.head_units; ++u) {
            sum += w[u] * ws.head_act[u];
        }
        ws.output[o] = sum;
    }
    return ws.output;
}

void backward_window(const Network& net, std::span<const double> window, std::span<const double> d_output,
                     Workspace& ws, std::span<double> grad)
{
    const ModelConfig& cfg = net.config();
    const std::size_t L = cfg.window_len;
    const std::size_t H = cfg.hidden_units;
    const double* p = net.params().data();
    double* g = grad.data();
    const auto& head = net.layout().head();
    const double* h_final = ws.layers.back().hidden.data() + (L - 1) * H;

    // Head: output layer, ReLU, hidden layer.
    std::fill(ws.d_head.begin(), ws.d_head.end(), 0.0);
    for (std::size_t o = 0; o < cfg.output_dim; ++o) {
        const double dy = d_output[o];
        g[head.b2 + o] += dy;
        double* gw = g + head.w2 + o * cfg.head_units;
        const double* w = p + head.w2 + o * cfg.head_units;
        for (std::size_t u = 0; u < cfg.head_units; ++u) {
            gw[u] += dy * ws.head_act[u];
            ws.d_head[u] += w[u] * dy;
        }
    }
    std::fill(ws.d_hidden_above.begin(), ws.d_hidden_above.end(), 0.0);
    double* dh_top = ws.d_hidden_above.data() + (L - 1) * H;
    for (std::size_t u = 0; u < cfg.head_units; ++u) {
        const double dz = ws.head_pre[u] > 0.0 ? ws.d_head[u] : 0.0;
        if (dz == 0.0) {
            continue;
        }
        g[head.b1 + u] += dz;
        double* gw = g + head.w1 + u * H;
        const double* w = p + head.w1 + u * H;
        for (std::size_t k = 0; k < H; ++k) {
            gw[k] += dz * h_final[k];
            dh_top[k] += w[k] * dz;
        }
    }

    // Backpropagation through time, top layer first.
    for (std::size_t li = cfg.lstm_layers; li-- > 0;) {
        const auto& layer = net.layout().lstm(li);
        const std::size_t in = layer.input_dim;
        const auto& cache = ws.layers[li];
        const double* inputs = li == 0 ? window.data() : ws.layers[li - 1].hidden.data();
        const double* w_in = p + layer.w_input;
        const double* w_rec = p + layer.w_recurrent;
        double* g_in = g + layer.w_input;
        double* g_rec = g + layer.w_recurrent;
        double* g_bias = g + layer.bias;
        const bool need_below = li > 0;
        if (need_below) {
            std::fill(ws.d_hidden_below.begin(), ws.d_hidden_below.end(), 0.0);
        }
        std::fill(ws.dh_next.begin(), ws.dh_next.end(), 0.0);
        std::fill(ws.dc_next.begin(), ws.dc_next.end(), 0.0);

        for (std::size_t t = L; t-- > 0;) {
            const double* gates = cache.gates.data() + t * 4 * H;
            const double* tc = cache.tanh_c.data() + t * H;
            const double* c_prev = t > 0 ? cache.cell.data() + (t - 1) * H : nullptr;
            const double* h_prev = t > 0 ? cache.hidden.data() + (t - 1) * H : nullptr;
            const double* dh_in = ws.d_hidden_above.data() + t * H;
            double* da = ws.d_gate.data();
            for (std::size_t j = 0; j < H; ++j) {
                const double ig = gates[j];
                const double fg = gates[H + j];
                const double gg = gates[2 * H + j];
                const double og = gates[3 * H + j];
                const double dh = dh_in[j] + ws.dh_next[j];
                const double dc = dh * og * (1.0 - tc[j] * tc[j]) + ws.dc_next[j];
                da[j] = dc * gg * ig * (1.0 - ig);
                da[H + j] = c_prev ? dc * c_prev[j] * fg * (1.0 - fg) : 0.0;
                da[2 * H + j] = dc * ig * (1.0 - gg * gg);
                da[3 * H + j] = dh * tc[j] * og * (1.0 - og);
                ws.dc_next[j] = dc * fg;
            }
            std::fill(ws.dh_next.begin(), ws.dh_next.end(), 0.0);
            const double* x = inputs + t * in;
            double* dx = need_below ? ws.d_hidden_below.data() + t * H : nullptr;
            for (std::size_t r = 0; r < 4 * H; ++r) {
                const double d = da[r];
                if (d == 0.0) {
                    continue;
                }
                g_bias[r] += d;
                double* gi = g_in + r * in;
                const double* wi = w_in + r * in;
                for (std::size_t k = 0; k < in; ++k) {
                    gi[k] += d * x[k];
                }
                if (dx) {
                    for (std::size_t k = 0; k < in; ++k) {
                        dx[k] += wi[k] * d;
                    }
                }
                if (h_prev) {
                    double* gr = g_rec + r * H;
                    const double* wr = w_rec + r * H;
                    for (std::size_t k = 0; k < H; ++k) {
                        gr[k] += d * h_prev[k];
                        ws.dh_next[k] += wr[k] * d;
                    }
                }
            }
        }
        if (need_below) {
            std::swap(ws.d_hidden_above, ws.d_hidden_below);
        }
    }
}

} // namespace detail

// Public single-window API ----------------------------------------------------------

LstmOutput lstm_forward(const Network& net, std::span<const double> window)
{
    detail::Workspace ws(net.config());
    detail::forward_window(net, window, ws);
    const std::size_t L = net.config().window_len;
    const std::size_t H = net.config().hidden_units;
    LstmOutput out;
    out.hidden_sequence = ws.layers.back().hidden;
    out.final_hidden.assign(out.hidden_sequence.begin() + static_cast<std::ptrdiff_t>((L - 1) * H),
                            out.hidden_sequence.end());
    return out;
}

std::vector<double> head_forward(const Network& net, std::span<const double> hidden)
{
    const ModelConfig& cfg = net.config();
    if (hidden.size() != cfg.hidden_units) {
        throw DimensionError("head input has " + std::to_string(hidden.size()) + " values, expected " +
                             std::to_string(cfg.hidden_units));
    }
    const double* p = net.params().data();
    const auto& head = net.layout().head();
    std::vector<double> act(cfg.head_units);
    for (std::size_t u = 0; u < cfg.head_units; ++u) {
        double sum = p[head.b1 + u];
        for (std::size_t k = 0; k < cfg.hidden_units; ++k) {
            sum += p[head.w1 + u * cfg.hidden_units + k] * hidden[k];
        }
        act[u] = sum > 0.0 ? sum : 0.0;
    }
    std::vector<double> out(cfg.output_dim);
    for (std::size_t o = 0; o < cfg.output_dim; ++o) {
        double sum = p[head.b2 + o];
        for (std::size_t u = 0; u < cfg.head_units; ++u) {
            sum += p[head.w2 + o * cfg.head_units + u] * act[u];
        }
        out[o] = sum;
    }
    return out;
}

std::vector<double> predict(const Network& net, std::span<const double> window)
{
    detail::Workspace ws(net.config());
    const auto out = detail::forward_window(net, window, ws);
    return {out.begin(), out.end()};
}

double mse_loss(std::span<const double> pred, std::span<const double> target)
{
    if (pred.size() != target.size()) {
        throw DimensionError("mse_loss: prediction has " + std::to_string(pred.size()) + " values, target " +
                             std::to_string(target.size()));
    }
    if (pred.empty()) {
        throw DimensionError("mse_loss: empty input");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

} // namespace powertwin::nn
