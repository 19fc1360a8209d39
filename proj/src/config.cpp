#include "powertwin/config.hpp"

#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/rng.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

extern char** environ;

namespace powertwin::config {

namespace {

const std::map<std::string, std::string>& defaults()
{
    static const std::map<std::string, std::string> table = {
        {"run_dir", "run"},
        {"seed", "0"},
        {"threads", "1"},
        {"vehicles", "i3"},
        {"phi", "38.5"},
        {"gasoline_factor", "2310"},
        {"ethanol_factor", "1510"},
        {"ethanol_share", "0"},
        {"afr", "14.7"},
        {"fuel_density", "740"},
        {"split.train", "0.70"},
        {"split.validation", "0.15"},
        {"split.test", "0.15"},
        {"split.manifest.ev", ""},
        {"split.manifest.icev", ""},
        {"window_len", "10"},
        {"adam_beta1", "0.9"},
        {"adam_beta2", "0.999"},
        {"adam_eps", "1e-8"},
        {"ev.hidden_units", "32"},
        {"ev.lstm_layers", "1"},
        {"ev.head_units", "32"},
        {"ev.epochs", "20"},
        {"ev.batch_size", "64"},
        {"ev.base_lr", "0.001"},
        {"ev.warmup_fraction", "0.05"},
        {"ev.warmup_steps", "auto"},
        {"ev.forget_bias", "1.0"},
        {"icev.hidden_units", "64"},
        {"icev.lstm_layers", "2"},
        {"icev.head_units", "64"},
        {"icev.epochs", "50"},
        {"icev.batch_size", "64"},
        {"icev.base_lr", "0.001"},
        {"icev.warmup_fraction", "0.05"},
        {"icev.warmup_steps", "auto"},
        {"icev.forget_bias", "1.0"},
        {"icev.feature_model", "false"},
    };
    return table;
}

bool known_key(const std::string& key)
{
    if (defaults().count(key)) {
        return true;
    }
    if (key.rfind("raw.", 0) == 0) {
        const auto names = ingest::profile_names();
        return std::find(names.begin(), names.end(), key.substr(4)) != names.end();
    }
    return false;
}

std::string domain_key(Domain domain)
{
    return domain == Domain::EV ? "ev" : "icev";
}

} // namespace

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::set(const std::string& key, const std::string& value)
{
    const std::string k = io::trim(key);
    if (!known_key(k)) {
        throw ConfigError("unknown config key '" + k + "'");
    }
    values_[k] = io::trim(value);
}

bool RunConfig::has(const std::string& key) const
{
    const auto it = values_.find(key);
    return it != values_.end() && !it->second.empty();
}

const std::string& RunConfig::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
        throw ConfigError("config key '" + key + "' is not set");
    }
    return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const
{
    return has(key) ? get(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const
{
    const double v = io::parse_double(get(key));
    if (!std::isfinite(v)) {
        throw ConfigError("config key '" + key + "' is not a finite number: '" + get(key) + "'");
    }
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const
{
    const std::string& text = get(key);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "' is not a non-negative integer: '" + text + "'");
    }
    return v;
}

bool RunConfig::get_bool(const std::string& key) const
{
    std::string v = get(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("config key '" + key + "' is not a boolean: '" + get(key) + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const
{
    std::vector<std::string> out;
    for (const auto& part : io::split(get_or(key, ""), ',')) {
        const std::string t = io::trim(part);
        if (!t.empty()) {
            out.push_back(t);
        }
    }
    return out;
}

std::string RunConfig::canonical() const
{
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k + " = " + v + "\n";
    }
    return out;
}

std::string RunConfig::hash() const
{
    return io::hex64(io::fnv1a64(canonical()));
}

std::filesystem::path RunConfig::run_dir() const
{
    return get("run_dir");
}

std::uint64_t RunConfig::seed() const
{
    return get_u64("seed");
}

int RunConfig::threads() const
{
    const auto t = get_u64("threads");
    if (t < 1 || t > 1024) {
        throw ConfigError("threads must lie in [1, 1024]");
    }
    return static_cast<int>(t);
}

emissions::EmissionFactors RunConfig::factors() const
{
    emissions::EmissionFactors f;
    f.phi = get_double("phi");
    f.gasoline = get_double("gasoline_factor");
    f.ethanol = get_double("ethanol_factor");
    f.ethanol_share = get_double("ethanol_share");
    f.afr = get_double("afr");
    f.fuel_density = get_double("fuel_density");
    try {
        f.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    return f;
}

dataset::SplitSpec RunConfig::split_spec() const
{
    dataset::SplitSpec s;
    s.train = get_double("split.train");
    s.validation = get_double("split.validation");
    s.test = get_double("split.test");
    s.seed = seed();
    s.validate();
    return s;
}

nn::ModelConfig RunConfig::model_config(Domain domain, pipeline::Role role, const std::string& vehicle) const
{
    const std::string d = domain_key(domain);
    nn::ModelConfig m;
    m.input_dim = pipeline::input_channels(role).size();
    m.output_dim = pipeline::target_channels(role).size();
    m.hidden_units = get_u64(d + ".hidden_units");
    m.lstm_layers = get_u64(d + ".lstm_layers");
    m.head_units = get_u64(d + ".head_units");
    m.window_len = get_u64("window_len");
    m.forget_bias = get_double(d + ".forget_bias");
    const std::string tag = d + "/" + std::string(pipeline::to_string(role)) + "/" + vehicle;
    m.seed = rng::derive_seed(seed(), io::fnv1a64(tag));
    m.validate();
    return m;
}

nn::TrainConfig RunConfig::train_config(Domain domain) const
{
    const std::string d = domain_key(domain);
    nn::TrainConfig t;
    t.epochs = get_u64(d + ".epochs");
    t.batch_size = get_u64(d + ".batch_size");
    t.base_lr = get_double(d + ".base_lr");
    t.warmup_fraction = get_double(d + ".warmup_fraction");
    if (get(d + ".warmup_steps") != "auto") {
        t.warmup_steps = get_u64(d + ".warmup_steps");
    }
    t.adam_beta1 = get_double("adam_beta1");
    t.adam_beta2 = get_double("adam_beta2");
    t.adam_eps = get_double("adam_eps");
    t.threads = threads();
    t.validate();
    return t;
}

void apply_text(RunConfig& config, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = io::trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value', got '" + t + "'");
        }
        config.set(t.substr(0, eq), t.substr(eq + 1));
    }
}

void apply_environment(RunConfig& config, const std::vector<std::pair<std::string, std::string>>& env)
{
    for (const auto& [name, value] : env) {
        if (name.rfind(kEnvPrefix, 0) != 0) {
            continue;
        }
        std::string key = name.substr(kEnvPrefix.size());
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        for (auto pos = key.find("__"); pos != std::string::npos; pos = key.find("__", pos + 1)) {
            key.replace(pos, 2, ".");
        }
        config.set(key, value);
    }
}

std::vector<std::pair<std::string, std::string>> process_environment()
{
    std::vector<std::pair<std::string, std::string>> out;
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind(kEnvPrefix, 0) != 0) {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides)
{
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override '" + o + "' is not key=value");
        }
        config.set(o.substr(0, eq), o.substr(eq + 1));
    }
}

RunConfig load(const std::optional<std::filesystem::path>& file,
               const std::vector<std::pair<std::string, std::string>>& env,
               const std::vector<std::string>& overrides)
{
    RunConfig config;
    if (file) {
        std::string text;
        try {
            text = io::read_text_file(*file);
        } catch (const IoError& e) {
            throw ConfigError(std::string("cannot read config file: ") + e.what());
        }
        apply_text(config, text);
    }
    apply_environment(config, env);
    apply_overrides(config, overrides);
    return config;
}

} // namespace powertwin::config
