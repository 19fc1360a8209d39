#pragma once

#include "powertwin/dataset.hpp"
#include "powertwin/nn/network.hpp"
#include "powertwin/nn/train.hpp"
#include "powertwin/schema.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace powertwin::pipeline {

/// f_D maps context to actuation; g_D maps [velocity, torque, throttle] to CO2 rate.
enum class Role : std::uint8_t { Feature, Emissions };

std::string_view to_string(Role role);
/// Accepts "feature"/"emissions" in any case.
Role parse_role(std::string_view text);

std::vector<Channel> input_channels(Role role);
std::vector<Channel> target_channels(Role role);

/// A trained regressor with everything needed to apply it to a raw trip.
struct SequenceModel {
    Role role = Role::Emissions;
    Domain domain = Domain::EV;
    std::string vehicle;
    nn::Network network{nn::ModelConfig{}};
    nn::TrainConfig train_config;
    dataset::MinMaxScaler input_scaler;
    dataset::MinMaxScaler target_scaler;
    nn::LossHistory history;
    /// Validation MAE per target channel in natural units; empty without validation trips.
    std::vector<double> validation_mae;

    std::size_t window_len() const { return network.config().window_len; }
    bool operator==(const SequenceModel& other) const;
};

/// Per-sample model output for samples [offset, offset + rows) of a trip,
/// `dim` values per row in natural units.
struct Prediction {
    std::size_t offset = 0;
    std::size_t dim = 1;
    std::vector<double> values;

    std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
    double at(std::size_t row, std::size_t d) const { return values[row * dim + d]; }
};

/// Sliding stride-1 windows over the whole trip; row k is the prediction for
/// sample window_len - 1 + k. Throws InputError when the trip is shorter than
/// the window, SchemaError when an input channel is missing.
Prediction predict_trip(const SequenceModel& model, const Trip& trip, int threads = 1);

/// Source of actuation estimates (torque, throttle) for a trip.
class ActuationPredictor {
public:
    virtual ~ActuationPredictor() = default;
    virtual Prediction predict(const Trip& trip) const = 0;
    /// Domain of the underlying model, empty for model-free predictors.
    virtual std::optional<Domain> domain() const { return std::nullopt; }
};

class ModelActuationPredictor : public ActuationPredictor {
public:
    explicit ModelActuationPredictor(const SequenceModel& model, int threads = 1);
    Prediction predict(const Trip& trip) const override;
    std::optional<Domain> domain() const override { return model_.domain; }

private:
    const SequenceModel& model_;
    int threads_;
};

/// Returns the trip's measured actuation from sample `offset` on.
class ReplayPredictor : public ActuationPredictor {
public:
    explicit ReplayPredictor(std::size_t offset = 0) : offset_(offset) {}
    Prediction predict(const Trip& trip) const override;

private:
    std::size_t offset_;
};

/// Copy of samples [actuation.offset, end) with torque and throttle replaced by `actuation`.
Trip substitute_actuation(const Trip& trip, const Prediction& actuation);

/// Mean absolute difference. Throws DimensionError on a length mismatch and
/// InputError on empty input.
double mae(std::span<const double> pred, std::span<const double> truth);

/// Generic trainer: fits scalers on `train_trips`, windows both splits and
/// trains. The role fixes input_dim and output_dim of `model_cfg`.
SequenceModel train_sequence_model(Role role, Domain domain, const std::vector<Trip>& train_trips,
                                   const std::vector<Trip>& validation_trips, nn::ModelConfig model_cfg,
                                   const nn::TrainConfig& train_cfg, const std::string& vehicle = {});

SequenceModel train_emissions_model(Domain domain, const std::vector<Trip>& train_trips,
                                    const std::vector<Trip>& validation_trips, const nn::ModelConfig& model_cfg,
                                    const nn::TrainConfig& train_cfg, const std::string& vehicle = {});

SequenceModel train_feature_model(Domain domain, const std::vector<Trip>& train_trips,
                                  const std::vector<Trip>& validation_trips, const nn::ModelConfig& model_cfg,
                                  const nn::TrainConfig& train_cfg, const std::string& vehicle = {});

/// Natural-unit MAE per target channel over all windows of `trips`.
std::vector<double> evaluate_mae(const SequenceModel& model, const std::vector<Trip>& trips, int threads = 1);

struct ProxyRow {
    std::string trip_id;
    double direct_mae = 0.0;   ///< g/s, g on measured actuation
    double proxy_mae = 0.0;    ///< g/s, g on predicted actuation
    double torque_mae = 0.0;   ///< Nm
    double throttle_mae = 0.0; ///< %
    std::size_t samples = 0;   ///< samples scored for direct and proxy

    double delta() const { return proxy_mae - direct_mae; }
};

struct ProxyReport {
    std::vector<ProxyRow> rows;

    std::vector<double> direct() const;
    std::vector<double> proxy() const;
    std::vector<double> deltas() const;
    std::vector<double> torque() const;
    std::vector<double> throttle() const;
    std::size_t proxy_not_worse() const;
};

/// Direct and proxy MAE are scored on the same samples: those where the
/// proxy is defined (actuation offset + window_len - 1 onwards). Throws
/// ConfigError when the feature predictor and g belong to different domains.
ProxyReport proxy_validate(const ActuationPredictor& f, const SequenceModel& g, const std::vector<Trip>& trips,
                           int threads = 1);

struct CounterfactualTotals {
    double ev_grams = 0.0;
    double icev_grams = 0.0;
    double gap_grams = 0.0;
};

struct CounterfactualResult {
    std::string trip_id;
    std::vector<double> time;         ///< s
    std::vector<double> velocity;     ///< km/h
    std::vector<double> torque;       ///< predicted EV torque, Nm
    std::vector<double> throttle;     ///< predicted EV throttle, %
    std::vector<double> ev_rate;      ///< counterfactual EV CO2, g/s
    std::vector<double> icev_rate;    ///< measured ICEV CO2, g/s
    std::vector<double> gap;          ///< ev_rate - icev_rate
    CounterfactualTotals totals;
    std::size_t first_sample = 0;     ///< index of time[0] in the source trip
};

/// Left Riemann sum of rate * dt over intervals [t_k, t_k+1).
double integrate_left(std::span<const double> time, std::span<const double> rate);

/// Feeds the ICEV context to f_E, then the ICEV velocity with the predicted
/// actuation to g_E. Throws InputError when the trip has fewer than
/// 2 * window_len - 1 samples, SchemaError on a missing context channel and
/// ConfigError when the models are not EV models.
CounterfactualResult counterfactual(const Trip& icev_trip, const ActuationPredictor& f_e, const SequenceModel& g_e,
                                    int threads = 1);

} // namespace powertwin::pipeline
