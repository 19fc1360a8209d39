#include "powertwin/checkpoint.hpp"

#include "powertwin/error.hpp"
#include "powertwin/table_io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace powertwin::checkpoint {

namespace {

std::string join(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += io::format_double(values[i]);
    }
    return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& key)
{
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        const double v = io::parse_double(token);
        if (std::isnan(v) && token != "nan") {
            throw IoError("checkpoint: bad number '" + token + "' in " + key);
        }
        out.push_back(v);
    }
    return out;
}

std::string scaler_line(const dataset::MinMaxScaler& s)
{
    std::string out;
    for (std::size_t c = 0; c < s.size(); ++c) {
        if (c > 0) {
            out += ' ';
        }
        out += std::string(channel_name(s.channels[c])) + ':' + io::format_double(s.min[c]) + ':' +
               io::format_double(s.max[c]);
    }
    return out;
}

dataset::MinMaxScaler parse_scaler(const std::string& text)
{
    dataset::MinMaxScaler s;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        const auto parts = io::split(token, ':');
        if (parts.size() != 3) {
            throw IoError("checkpoint: bad scaler entry '" + token + "'");
        }
        s.channels.push_back(parse_channel(parts[0]));
        s.min.push_back(io::parse_double(parts[1]));
        s.max.push_back(io::parse_double(parts[2]));
    }
    return s;
}

std::uint64_t to_u64(const std::string& text, const std::string& key)
{
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw IoError("checkpoint: '" + key + "' is not a non-negative integer: '" + text + "'");
    }
    return v;
}

double to_double(const std::string& text, const std::string& key)
{
    const double v = io::parse_double(text);
    if (std::isnan(v)) {
        throw IoError("checkpoint: '" + key + "' is not a number: '" + text + "'");
    }
    return v;
}

} // namespace

std::string format_checkpoint(const pipeline::SequenceModel& model, const Metadata& metadata)
{
    const auto& mc = model.network.config();
    const auto& tc = model.train_config;
    std::string out;
    const auto kv = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    out += std::string(kMagic) + "\n";
    for (const auto& [key, value] : metadata) {
        if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos) {
            throw IoError("checkpoint: metadata '" + key + "' cannot be stored");
        }
        kv("meta." + key, value);
    }
    kv("role", std::string(pipeline::to_string(model.role)));
    kv("domain", std::string(to_string(model.domain)));
    kv("vehicle", model.vehicle);
    kv("model.input_dim", std::to_string(mc.input_dim));
    kv("model.hidden_units", std::to_string(mc.hidden_units));
    kv("model.lstm_layers", std::to_string(mc.lstm_layers));
    kv("model.head_units", std::to_string(mc.head_units));
    kv("model.output_dim", std::to_string(mc.output_dim));
    kv("model.window_len", std::to_string(mc.window_len));
    kv("model.seed", std::to_string(mc.seed));
    kv("model.forget_bias", io::format_double(mc.forget_bias));
    kv("train.epochs", std::to_string(tc.epochs));
    kv("train.base_lr", io::format_double(tc.base_lr));
    kv("train.warmup_steps", tc.warmup_steps ? std::to_string(*tc.warmup_steps) : "auto");
    kv("train.warmup_fraction", io::format_double(tc.warmup_fraction));
    kv("train.batch_size", std::to_string(tc.batch_size));
    kv("train.adam_beta1", io::format_double(tc.adam_beta1));
    kv("train.adam_beta2", io::format_double(tc.adam_beta2));
    kv("train.adam_eps", io::format_double(tc.adam_eps));
    kv("train.threads", std::to_string(tc.threads));
    kv("scaler.input", scaler_line(model.input_scaler));
    kv("scaler.target", scaler_line(model.target_scaler));
    kv("history.train", join(model.history.train));
    kv("history.validation", join(model.history.validation));
    kv("validation_mae", join(model.validation_mae));
    const auto params = model.network.params();
    for (const auto& b : model.network.layout().blocks()) {
        out += "block " + b.name + " " + std::to_string(b.rows) + " " + std::to_string(b.cols) + "\n";
        for (std::size_t r = 0; r < b.rows; ++r) {
            for (std::size_t c = 0; c < b.cols; ++c) {
                if (c > 0) {
                    out += ' ';
                }
                out += io::format_double(params[b.offset + r * b.cols + c]);
            }
            out += '\n';
        }
    }
    out += "end\n";
    return out;
}

pipeline::SequenceModel parse_checkpoint(std::string_view text, Metadata* metadata)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || io::trim(line) != kMagic) {
        throw IoError("not a checkpoint: expected '" + std::string(kMagic) + "' on the first line");
    }
    std::map<std::string, std::string> header;
    Metadata meta;
    std::string pending_block;
    while (std::getline(in, line)) {
        if (line.rfind("block ", 0) == 0) {
            pending_block = line;
            break;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            const std::string t = io::trim(line);
            if (t.empty()) {
                continue;
            }
            const auto bare = t.find(" =");
            if (bare != std::string::npos && bare + 2 == t.size()) {
                header[t.substr(0, bare)] = "";
                continue;
            }
            throw IoError("checkpoint: malformed header line '" + line + "'");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (key.rfind("meta.", 0) == 0) {
            meta.emplace_back(key.substr(5), value);
        } else {
            header[key] = value;
        }
    }
    const auto get = [&header](const std::string& key) -> const std::string& {
        const auto it = header.find(key);
        if (it == header.end()) {
            throw IoError("checkpoint: missing key '" + key + "'");
        }
        return it->second;
    };

    nn::ModelConfig mc;
    mc.input_dim = to_u64(get("model.input_dim"), "model.input_dim");
    mc.hidden_units = to_u64(get("model.hidden_units"), "model.hidden_units");
    mc.lstm_layers = to_u64(get("model.lstm_layers"), "model.lstm_layers");
    mc.head_units = to_u64(get("model.head_units"), "model.head_units");
    mc.output_dim = to_u64(get("model.output_dim"), "model.output_dim");
    mc.window_len = to_u64(get("model.window_len"), "model.window_len");
    mc.seed = to_u64(get("model.seed"), "model.seed");
    mc.forget_bias = to_double(get("model.forget_bias"), "model.forget_bias");
    mc.validate();

    nn::TrainConfig tc;
    tc.epochs = to_u64(get("train.epochs"), "train.epochs");
    tc.base_lr = to_double(get("train.base_lr"), "train.base_lr");
    if (get("train.warmup_steps") != "auto") {
        tc.warmup_steps = to_u64(get("train.warmup_steps"), "train.warmup_steps");
    }
    tc.warmup_fraction = to_double(get("train.warmup_fraction"), "train.warmup_fraction");
    tc.batch_size = to_u64(get("train.batch_size"), "train.batch_size");
    tc.adam_beta1 = to_double(get("train.adam_beta1"), "train.adam_beta1");
    tc.adam_beta2 = to_double(get("train.adam_beta2"), "train.adam_beta2");
    tc.adam_eps = to_double(get("train.adam_eps"), "train.adam_eps");
    tc.threads = static_cast<int>(to_u64(get("train.threads"), "train.threads"));

    pipeline::SequenceModel model;
    model.role = pipeline::parse_role(get("role"));
    model.domain = parse_domain(get("domain"));
    model.vehicle = get("vehicle");
    model.train_config = tc;
    model.network = nn::Network(mc);
    model.input_scaler = parse_scaler(get("scaler.input"));
    model.target_scaler = parse_scaler(get("scaler.target"));
    model.history.train = parse_list(get("history.train"), "history.train");
    model.history.validation = parse_list(get("history.validation"), "history.validation");
    model.validation_mae = parse_list(get("validation_mae"), "validation_mae");
    if (model.input_scaler.size() != mc.input_dim || model.target_scaler.size() != mc.output_dim) {
        throw DimensionError("checkpoint: scaler channels do not match input_dim/output_dim");
    }

    auto params = model.network.params();
    for (const auto& b : model.network.layout().blocks()) {
        if (pending_block.empty()) {
            throw IoError("checkpoint: missing block '" + b.name + "'");
        }
        std::istringstream tag(pending_block);
        std::string word;
        std::string name;
        std::size_t rows = 0;
        std::size_t cols = 0;
        tag >> word >> name >> rows >> cols;
        if (name != b.name || rows != b.rows || cols != b.cols) {
            throw DimensionError("checkpoint: block '" + name + "' [" + std::to_string(rows) + "x" +
                                 std::to_string(cols) + "] where '" + b.name + "' [" + std::to_string(b.rows) + "x" +
                                 std::to_string(b.cols) + "] is expected");
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (!std::getline(in, line)) {
                throw IoError("checkpoint: block '" + name + "' is truncated");
            }
            const auto values = parse_list(line, name);
            if (values.size() != cols) {
                throw DimensionError("checkpoint: block '" + name + "' row " + std::to_string(r) + " has " +
                                     std::to_string(values.size()) + " values, expected " + std::to_string(cols));
            }
            std::copy(values.begin(), values.end(), params.begin() + static_cast<std::ptrdiff_t>(b.offset + r * cols));
        }
        pending_block.clear();
        if (!std::getline(in, line)) {
            throw IoError("checkpoint: missing end marker");
        }
        if (line.rfind("block ", 0) == 0) {
            pending_block = line;
        } else if (io::trim(line) != "end") {
            throw IoError("checkpoint: unexpected line '" + line + "'");
        }
    }
    if (!pending_block.empty()) {
        throw DimensionError("checkpoint: unexpected extra " + pending_block);
    }
    for (double p : model.network.params()) {
        if (!std::isfinite(p)) {
            throw IoError("checkpoint: non-finite parameter");
        }
    }
    if (metadata) {
        *metadata = std::move(meta);
    }
    return model;
}

void save_checkpoint(const std::filesystem::path& path, const pipeline::SequenceModel& model, const Metadata& metadata)
{
    io::write_text_file(path, format_checkpoint(model, metadata));
}

pipeline::SequenceModel load_checkpoint(const std::filesystem::path& path, Metadata* metadata)
{
    return parse_checkpoint(io::read_text_file(path), metadata);
}

} // namespace powertwin::checkpoint
