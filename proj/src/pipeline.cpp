#include "powertwin/pipeline.hpp"

#include "powertwin/error.hpp"
#include "powertwin/nn/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace powertwin::pipeline {

std::string_view to_string(Role role)
{
    return role == Role::Feature ? "feature" : "emissions";
}

Role parse_role(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "feature") {
        return Role::Feature;
    }
    if (lower == "emissions") {
        return Role::Emissions;
    }
    throw ConfigError("unknown role '" + std::string(text) + "' (expected feature or emissions)");
}

std::vector<Channel> input_channels(Role role)
{
    if (role == Role::Feature) {
        return {kContextChannels.begin(), kContextChannels.end()};
    }
    return {kEmissionsInputChannels.begin(), kEmissionsInputChannels.end()};
}

std::vector<Channel> target_channels(Role role)
{
    if (role == Role::Feature) {
        return {kActuationChannels.begin(), kActuationChannels.end()};
    }
    return {Channel::Co2Rate};
}

bool SequenceModel::operator==(const SequenceModel& other) const
{
    return role == other.role && domain == other.domain && vehicle == other.vehicle && network == other.network &&
           train_config == other.train_config && input_scaler == other.input_scaler &&
           target_scaler == other.target_scaler && history.train == other.history.train &&
           history.validation == other.history.validation && validation_mae == other.validation_mae;
}

namespace {

void require_channels(const Trip& trip, const std::vector<Channel>& channels)
{
    for (const auto& s : trip.samples) {
        for (Channel c : channels) {
            if (!std::isfinite(channel_value(s, c))) {
                throw SchemaError("trip '" + trip.trip_id + "': channel '" + std::string(channel_name(c)) +
                                  "' is missing or not finite");
            }
        }
    }
}

} // namespace

Prediction predict_trip(const SequenceModel& model, const Trip& trip, int threads)
{
    const std::size_t L = model.window_len();
    if (trip.size() < L) {
        throw InputError("trip '" + trip.trip_id + "' has " + std::to_string(trip.size()) +
                         " samples, the model window needs " + std::to_string(L));
    }
    require_channels(trip, model.input_scaler.channels);
    const dataset::WindowSpec spec{L, 1};
    dataset::MinMaxScaler no_targets;
    const auto set = dataset::make_windows(trip, spec, model.input_scaler, no_targets);
    const auto scaled = threads > 1 ? nn::predict_batch_parallel(model.network, set.data.inputs, set.data.count, threads)
                                    : nn::predict_batch_serial(model.network, set.data.inputs, set.data.count);
    Prediction p;
    p.offset = L - 1;
    p.dim = model.target_scaler.size();
    p.values = dataset::scaler_inverse(model.target_scaler, scaled);
    return p;
}

ModelActuationPredictor::ModelActuationPredictor(const SequenceModel& model, int threads)
    : model_(model), threads_(threads)
{
    if (model.role != Role::Feature) {
        throw ConfigError("actuation predictor needs a feature model");
    }
}

Prediction ModelActuationPredictor::predict(const Trip& trip) const
{
    return predict_trip(model_, trip, threads_);
}

Prediction ReplayPredictor::predict(const Trip& trip) const
{
    Prediction p;
    p.offset = offset_;
    p.dim = 2;
    for (std::size_t k = offset_; k < trip.size(); ++k) {
        p.values.push_back(trip.samples[k].motor_torque);
        p.values.push_back(trip.samples[k].throttle);
    }
    return p;
}

Trip substitute_actuation(const Trip& trip, const Prediction& actuation)
{
    if (actuation.dim != 2) {
        throw DimensionError("actuation prediction needs 2 values per sample, got " + std::to_string(actuation.dim));
    }
    if (actuation.offset + actuation.rows() != trip.size()) {
        throw DimensionError("actuation prediction covers samples " + std::to_string(actuation.offset) + ".." +
                             std::to_string(actuation.offset + actuation.rows()) + " of a " +
                             std::to_string(trip.size()) + "-sample trip");
    }
    Trip out{trip.trip_id, trip.domain, trip.vehicle, {}};
    out.samples.assign(trip.samples.begin() + static_cast<std::ptrdiff_t>(actuation.offset), trip.samples.end());
    for (std::size_t k = 0; k < out.samples.size(); ++k) {
        out.samples[k].motor_torque = actuation.at(k, 0);
        out.samples[k].throttle = actuation.at(k, 1);
    }
    return out;
}

double mae(std::span<const double> pred, std::span<const double> truth)
{
    if (pred.size() != truth.size()) {
        throw DimensionError("mae: " + std::to_string(pred.size()) + " predictions for " +
                             std::to_string(truth.size()) + " true values");
    }
    if (pred.empty()) {
        throw InputError("mae: empty series");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        sum += std::fabs(pred[i] - truth[i]);
    }
    return sum / static_cast<double>(pred.size());
}

SequenceModel train_sequence_model(Role role, Domain domain, const std::vector<Trip>& train_trips,
                                   const std::vector<Trip>& validation_trips, nn::ModelConfig model_cfg,
                                   const nn::TrainConfig& train_cfg, const std::string& vehicle)
{
    const auto inputs = input_channels(role);
    const auto targets = target_channels(role);
    model_cfg.input_dim = inputs.size();
    model_cfg.output_dim = targets.size();
    model_cfg.validate();
    for (const auto& t : train_trips) {
        require_channels(t, inputs);
        require_channels(t, targets);
    }
    for (const auto& t : validation_trips) {
        require_channels(t, inputs);
        require_channels(t, targets);
    }
    if (train_trips.empty()) {
        throw InputError("no training trips");
    }

    SequenceModel model;
    model.role = role;
    model.domain = domain;
    model.vehicle = vehicle;
    model.train_config = train_cfg;
    model.input_scaler = dataset::scaler_fit(train_trips, inputs);
    model.target_scaler = dataset::scaler_fit(train_trips, targets);

    const dataset::WindowSpec spec{model_cfg.window_len, 1};
    const auto train_set = dataset::make_windows(train_trips, spec, model.input_scaler, model.target_scaler);
    if (train_set.data.count == 0) {
        throw InputError("training split has no trip with at least " + std::to_string(spec.length) + " samples");
    }
    const auto val_set = dataset::make_windows(validation_trips, spec, model.input_scaler, model.target_scaler);
    auto result = nn::train(model_cfg, train_cfg, train_set.data, val_set.data.count > 0 ? &val_set.data : nullptr);
    model.network = std::move(result.network);
    model.history = std::move(result.history);
    if (val_set.data.count > 0) {
        model.validation_mae = evaluate_mae(model, validation_trips, train_cfg.threads);
    }
    return model;
}

SequenceModel train_emissions_model(Domain domain, const std::vector<Trip>& train_trips,
                                    const std::vector<Trip>& validation_trips, const nn::ModelConfig& model_cfg,
                                    const nn::TrainConfig& train_cfg, const std::string& vehicle)
{
    return train_sequence_model(Role::Emissions, domain, train_trips, validation_trips, model_cfg, train_cfg,
                                vehicle);
}

SequenceModel train_feature_model(Domain domain, const std::vector<Trip>& train_trips,
                                  const std::vector<Trip>& validation_trips, const nn::ModelConfig& model_cfg,
                                  const nn::TrainConfig& train_cfg, const std::string& vehicle)
{
    return train_sequence_model(Role::Feature, domain, train_trips, validation_trips, model_cfg, train_cfg, vehicle);
}

std::vector<double> evaluate_mae(const SequenceModel& model, const std::vector<Trip>& trips, int threads)
{
    const std::size_t dim = model.target_scaler.size();
    std::vector<double> sums(dim, 0.0);
    std::size_t count = 0;
    for (const auto& trip : trips) {
        if (trip.size() < model.window_len()) {
            continue;
        }
        const auto p = predict_trip(model, trip, threads);
        for (std::size_t r = 0; r < p.rows(); ++r) {
            const auto& s = trip.samples[p.offset + r];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[d] += std::fabs(p.at(r, d) - channel_value(s, model.target_scaler.channels[d]));
            }
        }
        count += p.rows();
    }
    if (count == 0) {
        throw InputError("evaluate_mae: no trip is long enough for a window");
    }
    for (auto& s : sums) {
        s /= static_cast<double>(count);
    }
    return sums;
}

std::vector<double> ProxyReport::direct() const
{
    std::vector<double> v;
    for (const auto& r : rows) {
        v.push_back(r.direct_mae);
    }
    return v;
}

std::vector<double> ProxyReport::proxy() const
{
    std::vector<double> v;
    for (const auto& r : rows) {
        v.push_back(r.proxy_mae);
    }
    return v;
}

std::vector<double> ProxyReport::deltas() const
{
    std::vector<double> v;
    for (const auto& r : rows) {
        v.push_back(r.delta());
    }
    return v;
}

std::vector<double> ProxyReport::torque() const
{
    std::vector<double> v;
    for (const auto& r : rows) {
        v.push_back(r.torque_mae);
    }
    return v;
}

std::vector<double> ProxyReport::throttle() const
{
    std::vector<double> v;
    for (const auto& r : rows) {
        v.push_back(r.throttle_mae);
    }
    return v;
}

std::size_t ProxyReport::proxy_not_worse() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ProxyRow& r) { return r.proxy_mae <= r.direct_mae; }));
}

ProxyReport proxy_validate(const ActuationPredictor& f, const SequenceModel& g, const std::vector<Trip>& trips,
                           int threads)
{
    if (g.role != Role::Emissions) {
        throw ConfigError("proxy_validate: g must be an emissions model");
    }
    if (const auto d = f.domain(); d && *d != g.domain) {
        throw ConfigError("proxy_validate: feature model is " + std::string(to_string(*d)) +
                          ", emissions model is " + std::string(to_string(g.domain)));
    }
    ProxyReport report;
    for (const auto& trip : trips) {
        const Prediction u = f.predict(trip);
        const Trip substituted = substitute_actuation(trip, u);
        if (substituted.size() < g.window_len()) {
            throw InputError("trip '" + trip.trip_id + "' is too short for proxy validation (" +
                             std::to_string(trip.size()) + " samples)");
        }
        const Prediction direct = predict_trip(g, trip, threads);
        const Prediction proxy = predict_trip(g, substituted, threads);
        const std::size_t first = u.offset + proxy.offset;

        ProxyRow row;
        row.trip_id = trip.trip_id;
        std::vector<double> truth;
        std::vector<double> direct_vals;
        for (std::size_t k = first; k < trip.size(); ++k) {
            truth.push_back(trip.samples[k].co2_rate);
            direct_vals.push_back(direct.values[k - direct.offset]);
        }
        row.samples = truth.size();
        row.direct_mae = mae(direct_vals, truth);
        row.proxy_mae = mae(proxy.values, truth);

        std::vector<double> torque_pred;
        std::vector<double> torque_true;
        std::vector<double> throttle_pred;
        std::vector<double> throttle_true;
        for (std::size_t r = 0; r < u.rows(); ++r) {
            const auto& s = trip.samples[u.offset + r];
            torque_pred.push_back(u.at(r, 0));
            torque_true.push_back(s.motor_torque);
            throttle_pred.push_back(u.at(r, 1));
            throttle_true.push_back(s.throttle);
        }
        row.torque_mae = mae(torque_pred, torque_true);
        row.throttle_mae = mae(throttle_pred, throttle_true);
        report.rows.push_back(std::move(row));
    }
    return report;
}

double integrate_left(std::span<const double> time, std::span<const double> rate)
{
    if (time.size() != rate.size()) {
        throw DimensionError("integrate_left: " + std::to_string(time.size()) + " times for " +
                             std::to_string(rate.size()) + " rates");
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < time.size(); ++k) {
        total += rate[k] * (time[k + 1] - time[k]);
    }
    return total;
}

CounterfactualResult counterfactual(const Trip& icev_trip, const ActuationPredictor& f_e, const SequenceModel& g_e,
                                    int threads)
{
    if (g_e.role != Role::Emissions || g_e.domain != Domain::EV) {
        throw ConfigError("counterfactual needs an EV emissions model");
    }
    if (const auto d = f_e.domain(); d && *d != Domain::EV) {
        throw ConfigError("counterfactual needs an EV feature model");
    }
    require_channels(icev_trip, {kContextChannels.begin(), kContextChannels.end()});
    const std::size_t L = g_e.window_len();
    if (icev_trip.size() < 2 * L - 1) {
        throw InputError("trip '" + icev_trip.trip_id + "' has " + std::to_string(icev_trip.size()) +
                         " samples, the counterfactual needs at least " + std::to_string(2 * L - 1));
    }
    const Prediction u = f_e.predict(icev_trip);
    const Trip substituted = substitute_actuation(icev_trip, u);
    if (substituted.size() < L) {
        throw InputError("trip '" + icev_trip.trip_id + "' is too short after feature prediction");
    }
    const Prediction e = predict_trip(g_e, substituted, threads);
    const std::size_t first = u.offset + e.offset;

    CounterfactualResult r;
    r.trip_id = icev_trip.trip_id;
    r.first_sample = first;
    for (std::size_t k = first; k < icev_trip.size(); ++k) {
        const auto& s = icev_trip.samples[k];
        const std::size_t row = k - first;
        r.time.push_back(s.time);
        r.velocity.push_back(s.velocity);
        r.torque.push_back(u.at(k - u.offset, 0));
        r.throttle.push_back(u.at(k - u.offset, 1));
        r.ev_rate.push_back(e.values[row]);
        r.icev_rate.push_back(s.co2_rate);
        r.gap.push_back(e.values[row] - s.co2_rate);
    }
    r.totals.ev_grams = integrate_left(r.time, r.ev_rate);
    r.totals.icev_grams = integrate_left(r.time, r.icev_rate);
    r.totals.gap_grams = integrate_left(r.time, r.gap);
    return r;
}

} // namespace powertwin::pipeline
