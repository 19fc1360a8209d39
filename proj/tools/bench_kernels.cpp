#include "powertwin/nn/kernels.hpp"
#include "powertwin/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <omp.h>

using namespace powertwin;

namespace {

template <typename F>
double best_of(int reps, F&& f)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-12});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    return worst;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Serial vs OpenMP batch kernels", "bench_kernels"};
    std::size_t hidden = 32;
    std::size_t layers = 1;
    std::size_t windows = 1024;
    int max_threads = omp_get_max_threads();
    int reps = 3;
    app.add_option("--hidden", hidden)->capture_default_str();
    app.add_option("--layers", layers)->capture_default_str();
    app.add_option("--windows", windows)->capture_default_str();
    app.add_option("--threads", max_threads, "Largest thread count to try")->capture_default_str();
    app.add_option("--reps", reps)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    nn::ModelConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden_units = hidden;
    cfg.head_units = hidden;
    cfg.lstm_layers = layers;
    cfg.output_dim = 1;
    cfg.window_len = 10;
    cfg.seed = 1;
    const auto net = nn::Network::initialized(cfg);
    rng::Engine g(7);
    std::vector<double> inputs(windows * cfg.window_len * cfg.input_dim);
    std::vector<double> targets(windows);
    for (auto& v : inputs) {
        v = rng::uniform01(g);
    }
    for (auto& v : targets) {
        v = rng::uniform01(g);
    }
    const nn::WindowBatch batch{inputs, targets, windows};

    nn::BatchGradient serial;
    const double t_serial = best_of(reps, [&] { serial = nn::batch_gradient_serial(net, batch); });
    std::vector<double> pred_serial;
    const double p_serial = best_of(reps, [&] { pred_serial = nn::predict_batch_serial(net, inputs, windows); });
    std::printf("hidden=%zu layers=%zu windows=%zu params=%zu\n", hidden, layers, windows, net.params().size());
    std::printf("%-10s %8s %12s %8s %12s %12s\n", "kernel", "threads", "seconds", "speedup", "grad_reldiff",
                "pred_reldiff");
    std::printf("%-10s %8d %12.5f %8.2f %12s %12s\n", "serial", 1, t_serial, 1.0, "-", "-");
    for (int t = 1; t <= std::max(1, max_threads); t *= 2) {
        nn::BatchGradient par;
        const double t_par = best_of(reps, [&] { par = nn::batch_gradient_parallel(net, batch, {}, t); });
        std::vector<double> pred_par;
        best_of(1, [&] { pred_par = nn::predict_batch_parallel(net, inputs, windows, t); });
        std::printf("%-10s %8d %12.5f %8.2f %12.3g %12.3g\n", "openmp", t, t_par, t_serial / t_par,
                    max_rel_diff(serial.gradient.values, par.gradient.values), max_rel_diff(pred_serial, pred_par));
    }
    std::printf("predict serial: %.5f s\n", p_serial);
    return 0;
}
