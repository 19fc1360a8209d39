#pragma once

#include "powertwin/dataset.hpp"
#include "powertwin/emissions.hpp"
#include "powertwin/nn/config.hpp"
#include "powertwin/pipeline.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace powertwin::config {

inline constexpr std::string_view kEnvPrefix = "POWERTWIN_";

/// Declarative run configuration: `key = value` pairs over documented defaults.
///
/// Keys:
///   run_dir, seed, threads, vehicles (comma list of ingest profiles),
///   raw.<profile> (raw data directory), phi, gasoline_factor, ethanol_factor,
///   ethanol_share, afr, fuel_density, split.train, split.validation,
///   split.test, split.manifest.<ev|icev>, window_len, adam_beta1, adam_beta2,
///   adam_eps, <ev|icev>.{hidden_units, lstm_layers, head_units, epochs,
///   batch_size, base_lr, warmup_fraction, warmup_steps, forget_bias},
///   icev.feature_model (enables training f for the ICEV domain).
class RunConfig {
public:
    /// Every documented key at its default value.
    RunConfig();

    /// Throws ConfigError for an unknown key.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    /// Throws ConfigError when the key has no value.
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    double get_double(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::string> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    /// Sorted `key = value` lines; the hash input.
    std::string canonical() const;
    /// 16 hex digits of FNV-1a over canonical().
    std::string hash() const;

    std::filesystem::path run_dir() const;
    std::uint64_t seed() const;
    int threads() const;
    emissions::EmissionFactors factors() const;
    dataset::SplitSpec split_spec() const;
    nn::ModelConfig model_config(Domain domain, pipeline::Role role, const std::string& vehicle = {}) const;
    nn::TrainConfig train_config(Domain domain) const;

private:
    std::map<std::string, std::string> values_;
};

/// Parses `key = value` lines; `#` starts a comment line. Throws ConfigError
/// on a malformed line or unknown key.
void apply_text(RunConfig& config, std::string_view text);

/// POWERTWIN_<KEY> variables, lower-cased, with `__` standing for `.`
/// (POWERTWIN_EV__EPOCHS sets ev.epochs).
void apply_environment(RunConfig& config, const std::vector<std::pair<std::string, std::string>>& env);
std::vector<std::pair<std::string, std::string>> process_environment();

/// `key=value` override strings.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);

/// Defaults < file < environment < overrides.
RunConfig load(const std::optional<std::filesystem::path>& file,
               const std::vector<std::pair<std::string, std::string>>& env,
               const std::vector<std::string>& overrides);

} // namespace powertwin::config
