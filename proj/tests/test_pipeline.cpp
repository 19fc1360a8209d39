#include "doctest.h"
#include "oracles.hpp"

#include "powertwin/error.hpp"
#include "powertwin/pipeline.hpp"
#include "powertwin/rng.hpp"
#include "powertwin/synth.hpp"

#include <cmath>

using namespace powertwin;
using namespace powertwin::pipeline;

namespace {

nn::ModelConfig tiny_model(std::size_t hidden = 4)
{
    nn::ModelConfig c;
    c.hidden_units = hidden;
    c.head_units = hidden;
    c.window_len = 10;
    c.seed = 9;
    return c;
}

nn::TrainConfig quick_train(std::size_t epochs = 2)
{
    nn::TrainConfig t;
    t.epochs = epochs;
    t.batch_size = 16;
    t.base_lr = 1e-2;
    return t;
}

synth::World small_world(std::size_t ev = 6, std::size_t icev = 2, std::size_t samples = 60)
{
    synth::WorldSpec spec;
    spec.seed = 5;
    spec.ev_trips = ev;
    spec.icev_trips = icev;
    spec.samples_per_trip = samples;
    return synth::make_world(spec);
}

} // namespace

TEST_CASE("mae")
{
    CHECK(mae(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(mae(std::vector<double>{1, 3}, std::vector<double>{2, 2}) == 1.0);
    CHECK_THROWS_AS(mae(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
    CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST_CASE("roles and channels")
{
    CHECK(parse_role("Feature") == Role::Feature);
    CHECK(to_string(Role::Emissions) == "emissions");
    CHECK_THROWS_AS(parse_role("both"), ConfigError);
    CHECK(input_channels(Role::Emissions) ==
          std::vector<Channel>{Channel::Velocity, Channel::MotorTorque, Channel::Throttle});
    CHECK(input_channels(Role::Feature).size() == 4);
    CHECK(target_channels(Role::Feature) == std::vector<Channel>{Channel::MotorTorque, Channel::Throttle});
    CHECK(target_channels(Role::Emissions) == std::vector<Channel>{Channel::Co2Rate});
}

TEST_CASE("trained models carry role-specific shapes and train-only scalers")
{
    const auto world = small_world();
    const std::vector<Trip> train(world.ev_trips.begin(), world.ev_trips.begin() + 4);
    const std::vector<Trip> valid(world.ev_trips.begin() + 4, world.ev_trips.end());
    const auto g = train_emissions_model(Domain::EV, train, valid, tiny_model(), quick_train(), "synthetic");
    CHECK(g.network.config().input_dim == 3);
    CHECK(g.network.config().output_dim == 1);
    CHECK(g.validation_mae.size() == 1);
    CHECK(g.history.train.size() == 2);
    CHECK(g.history.validation.size() == 2);
    CHECK(g.input_scaler == dataset::scaler_fit(train, input_channels(Role::Emissions)));
    CHECK(g.target_scaler == dataset::scaler_fit(train, target_channels(Role::Emissions)));

    const auto f = train_feature_model(Domain::EV, train, valid, tiny_model(), quick_train());
    CHECK(f.network.config().input_dim == 4);
    CHECK(f.network.config().output_dim == 2);
    CHECK(f.validation_mae.size() == 2);

    const auto p = predict_trip(g, world.ev_trips[0]);
    CHECK(p.offset == 9);
    CHECK(p.rows() == 51);
    Trip short_trip = world.ev_trips[0];
    short_trip.samples.resize(9);
    CHECK_THROWS_AS(predict_trip(g, short_trip), InputError);
    Trip broken = world.ev_trips[0];
    broken.samples[3].velocity = std::nan("");
    CHECK_THROWS_AS(predict_trip(g, broken), SchemaError);
}

TEST_CASE("replayed actuation makes proxy equal to direct")
{
    const auto world = small_world();
    const auto g = train_emissions_model(Domain::EV, world.ev_trips, {}, tiny_model(), quick_train());
    const auto report = proxy_validate(ReplayPredictor{}, g, world.ev_trips);
    REQUIRE(report.rows.size() == world.ev_trips.size());
    for (const auto& row : report.rows) {
        CHECK(row.proxy_mae == row.direct_mae);
        CHECK(row.torque_mae == 0.0);
        CHECK(row.throttle_mae == 0.0);
        CHECK(row.samples == 51);
    }
    CHECK(report.proxy_not_worse() == world.ev_trips.size());
}

TEST_CASE("proxy validation scores direct and proxy on the same samples")
{
    const auto world = small_world();
    const auto g = train_emissions_model(Domain::EV, world.ev_trips, {}, tiny_model(), quick_train());
    const auto f = train_feature_model(Domain::EV, world.ev_trips, {}, tiny_model(), quick_train());
    const auto report = proxy_validate(ModelActuationPredictor(f), g, world.ev_trips);
    for (const auto& row : report.rows) {
        CHECK(row.samples == 60 - 18);
        CHECK(row.direct_mae >= 0.0);
        CHECK(row.proxy_mae >= 0.0);
        CHECK(row.torque_mae > 0.0);
    }

    const auto icev_f = train_feature_model(Domain::ICEV, world.icev_trips, {}, tiny_model(), quick_train());
    CHECK_THROWS_AS(proxy_validate(ModelActuationPredictor(icev_f), g, world.ev_trips), ConfigError);
    CHECK_THROWS_AS(ModelActuationPredictor{g}, ConfigError);
}

TEST_CASE("constant targets are reproduced exactly")
{
    auto world = small_world(4, 0, 40);
    for (auto& trip : world.ev_trips) {
        for (auto& s : trip.samples) {
            s.co2_rate = 0.0375;
            s.throttle = 12.0;
        }
    }
    const auto g = train_emissions_model(Domain::EV, world.ev_trips, world.ev_trips, tiny_model(), quick_train());
    CHECK(g.validation_mae[0] < 1e-12);
    CHECK(evaluate_mae(g, world.ev_trips)[0] < 1e-12);

    const auto f = train_feature_model(Domain::EV, world.ev_trips, world.ev_trips, tiny_model(), quick_train());
    CHECK(evaluate_mae(f, world.ev_trips)[1] < 1e-12);
}

TEST_CASE("learnable maps")
{
    auto world = small_world(8, 0, 80);
    double vmax = 0.0;
    for (const auto& trip : world.ev_trips) {
        for (const auto& s : trip.samples) {
            vmax = std::max(vmax, s.velocity);
        }
    }
    for (auto& trip : world.ev_trips) {
        for (auto& s : trip.samples) {
            s.co2_rate = 0.01 * s.velocity / vmax;
            s.motor_torque = 0.8 * s.velocity + 60.0 * s.longitudinal_accel + 5.0;
        }
    }
    const std::vector<Trip> train(world.ev_trips.begin(), world.ev_trips.begin() + 6);
    const std::vector<Trip> valid(world.ev_trips.begin() + 6, world.ev_trips.end());

    SUBCASE("emissions proportional to scaled speed")
    {
        const auto g = train_emissions_model(Domain::EV, train, valid, tiny_model(8), quick_train(10));
        CHECK(g.validation_mae[0] < 1e-3);
    }
    SUBCASE("torque affine in speed and acceleration")
    {
        auto t = quick_train(40);
        t.batch_size = 8;
        const auto f = train_feature_model(Domain::EV, train, valid, tiny_model(16), t);
        CHECK(f.validation_mae[0] < 0.5);
    }
}

TEST_CASE("phi scaling passes through a retrained emissions model")
{
    const auto world = small_world();
    const double c = 2.5;
    auto scaled = world.ev_trips;
    for (auto& trip : scaled) {
        for (auto& s : trip.samples) {
            s.co2_rate *= c;
        }
    }
    const std::vector<Trip> train(world.ev_trips.begin(), world.ev_trips.begin() + 4);
    const std::vector<Trip> valid(world.ev_trips.begin() + 4, world.ev_trips.end());
    const std::vector<Trip> train_c(scaled.begin(), scaled.begin() + 4);
    const std::vector<Trip> valid_c(scaled.begin() + 4, scaled.end());
    const auto g = train_emissions_model(Domain::EV, train, valid, tiny_model(), quick_train(3));
    const auto gc = train_emissions_model(Domain::EV, train_c, valid_c, tiny_model(), quick_train(3));
    CHECK(evaluate_mae(gc, valid_c)[0] <= c * g.validation_mae[0] + 1e-6);
    for (std::size_t i = 0; i < valid.size(); ++i) {
        const auto p = predict_trip(g, valid[i]);
        const auto pc = predict_trip(gc, valid_c[i]);
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            CHECK(pc.values[k] == doctest::Approx(c * p.values[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("integration rule")
{
    rng::Engine g(4);
    for (int c = 0; c < 50; ++c) {
        std::vector<double> t{0.0};
        std::vector<double> r{rng::uniform(g, 0.0, 3.0)};
        for (int k = 1; k < 40; ++k) {
            t.push_back(t.back() + rng::uniform(g, 0.5, 1.5));
            r.push_back(rng::uniform(g, 0.0, 3.0));
        }
        double left = 0.0;
        double correction = 0.0;
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
            left += r[k] * (t[k + 1] - t[k]);
            correction += 0.5 * (r[k + 1] - r[k]) * (t[k + 1] - t[k]);
        }
        const double sum = integrate_left(t, r);
        CHECK(std::abs(sum - left) <= 1e-9);
        CHECK(std::abs(oracle::trapezoid(t, r) - (sum + correction)) <= 1e-9);
    }
    const std::vector<double> t{0.0, 1.0, 3.0};
    CHECK(integrate_left(t, std::vector<double>{2.0, 2.0, 2.0}) == doctest::Approx(oracle::trapezoid(t, {2.0, 2.0, 2.0})));
    CHECK_THROWS_AS(integrate_left(t, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("counterfactual")
{
    const auto world = small_world(6, 2, 60);
    const auto f = train_feature_model(Domain::EV, world.ev_trips, {}, tiny_model(), quick_train());
    const auto g = train_emissions_model(Domain::EV, world.ev_trips, {}, tiny_model(), quick_train());
    const ModelActuationPredictor fp(f);

    SUBCASE("series alignment and totals")
    {
        const auto& trip = world.icev_trips[0];
        const auto r = counterfactual(trip, fp, g);
        CHECK(r.first_sample == 18);
        CHECK(r.time.size() == 42);
        CHECK(r.ev_rate.size() == 42);
        CHECK(r.gap.size() == 42);
        CHECK(r.time[0] == trip.samples[18].time);
        for (std::size_t k = 0; k < r.gap.size(); ++k) {
            CHECK(r.gap[k] == r.ev_rate[k] - r.icev_rate[k]);
        }
        CHECK(r.totals.gap_grams == doctest::Approx(r.totals.ev_grams - r.totals.icev_grams).epsilon(1e-12));
        CHECK(r.totals.ev_grams == doctest::Approx(integrate_left(r.time, r.ev_rate)));

        const auto again = counterfactual(trip, fp, g);
        CHECK(again.ev_rate == r.ev_rate);
    }
    SUBCASE("zero context gives a constant stream")
    {
        Trip idle{"idle", Domain::ICEV, "qx50", {}};
        for (int k = 0; k < 30; ++k) {
            HarmonizedSample s;
            s.time = k;
            idle.samples.push_back(s);
        }
        const auto r = counterfactual(idle, fp, g);
        for (double e : r.ev_rate) {
            CHECK(e == r.ev_rate.front());
        }
        const auto u = predict_trip(f, idle);
        Trip fed = idle;
        fed.samples.resize(10);
        for (auto& s : fed.samples) {
            s.motor_torque = u.at(0, 0);
            s.throttle = u.at(0, 1);
        }
        CHECK(predict_trip(g, fed).values[0] == r.ev_rate.front());
    }
    SUBCASE("preconditions")
    {
        Trip short_trip = world.icev_trips[0];
        short_trip.samples.resize(18);
        CHECK_THROWS_AS(counterfactual(short_trip, fp, g), InputError);
        Trip broken = world.icev_trips[0];
        broken.samples[5].ambient_temp = std::nan("");
        CHECK_THROWS_AS(counterfactual(broken, fp, g), SchemaError);
        const auto icev_g = train_emissions_model(Domain::ICEV, world.icev_trips, {}, tiny_model(), quick_train());
        CHECK_THROWS_AS(counterfactual(world.icev_trips[0], fp, icev_g), ConfigError);
    }
}

TEST_CASE("substitute_actuation")
{
    const auto world = small_world(1, 0, 20);
    const auto& trip = world.ev_trips[0];
    Prediction u;
    u.offset = 5;
    u.dim = 2;
    for (std::size_t k = 5; k < 20; ++k) {
        u.values.push_back(1.0 * k);
        u.values.push_back(2.0 * k);
    }
    const Trip s = substitute_actuation(trip, u);
    CHECK(s.size() == 15);
    CHECK(s.samples[0].motor_torque == 5.0);
    CHECK(s.samples[14].throttle == 38.0);
    CHECK(s.samples[3].velocity == trip.samples[8].velocity);
    u.values.pop_back();
    u.values.pop_back();
    CHECK_THROWS_AS(substitute_actuation(trip, u), DimensionError);
}
