#include "doctest.h"
#include "oracles.hpp"

#include "powertwin/emissions.hpp"
#include "powertwin/error.hpp"

#include <random>

using namespace powertwin;
using namespace powertwin::emissions;

TEST_CASE("ev_rate examples")
{
    const EmissionFactors f;
    CHECK(ev_rate({360.0, 100.0}, f) == doctest::Approx(0.385).epsilon(1e-12));
    CHECK(ev_rate({0.0, 0.0}, f) == 0.0);
    CHECK(ev_rate({400.0, 0.0}, f) == 0.0);
    CHECK(ev_rate({360.0, -50.0}, f) == 0.0);
    CHECK_THROWS_AS(ev_rate({std::nan(""), 1.0}, f), InputError);
}

TEST_CASE("icev_rate examples")
{
    EmissionFactors f;
    CHECK(icev_rate(60.0, 12.0, f) == doctest::Approx(3.20833).epsilon(1e-5));
    f.ethanol_share = 100.0;
    CHECK(icev_rate(60.0, 12.0, f) == doctest::Approx(2.09722).epsilon(1e-5));
    CHECK(icev_rate(0.0, 12.0, f) == 0.0);
    CHECK(icev_rate(0.0, 0.0, f) == 0.0);
    CHECK(icev_rate(0.0, -3.0, f) == 0.0);
    CHECK_THROWS_AS(icev_rate(30.0, 0.0, f), InputError);
    CHECK_THROWS_AS(icev_rate(30.0, -1.0, f), InputError);
}

TEST_CASE("fuel flow from MAF examples")
{
    const EmissionFactors f;
    CHECK(fuel_flow_from_maf(14.7, f) == doctest::Approx(4.86486).epsilon(1e-5));
    CHECK(fuel_flow_from_maf(0.0, f) == 0.0);
    CHECK(fuel_flow_from_maf(10.0, f) == doctest::Approx(3.30943).epsilon(1e-5));
    CHECK(fuel_flow_from_mass(1.0, f) == doctest::Approx(3600.0 / 740.0));
    CHECK(fuel_flow_from_ccps(1.0) == doctest::Approx(3.6));
}

TEST_CASE("efficiency K examples")
{
    CHECK(efficiency_k(60.0, 5.0) == doctest::Approx(12.0));
    CHECK(efficiency_k(0.0, 5.0) == 0.0);
    CHECK(efficiency_k(48.65, 3.30943) == doctest::Approx(14.70).epsilon(0.01 / 14.70));
    CHECK_THROWS_AS(efficiency_k(10.0, 0.0), InputError);
    CHECK_THROWS_AS(efficiency_k(10.0, -1.0), InputError);
}

TEST_CASE("CO2 volume to mass examples")
{
    CHECK(co2_volume_to_mass(0.6, 1800.0, 1.0) == doctest::Approx(18.0));
    CHECK(co2_volume_to_mass(0.0, 1234.0, 0.3) == 0.0);
    CHECK(co2_volume_to_mass(0.6, 1800.0, 0.5) == doctest::Approx(9.0));
}

TEST_CASE("formulas agree with hand-arithmetic oracles on random inputs")
{
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        EmissionFactors f;
        f.phi = 1.0 + 800.0 * u(g);
        f.ethanol_share = 100.0 * u(g);
        f.afr = 9.0 + 8.0 * u(g);
        f.fuel_density = 700.0 + 100.0 * u(g);
        const double volts = 200.0 + 300.0 * u(g);
        const double amps = -100.0 + 400.0 * u(g);
        const double v = 150.0 * u(g);
        const double k = 0.5 + 30.0 * u(g);
        const double maf = 80.0 * u(g);
        const double flow = 2.0 * u(g);
        const double dilution = 0.01 + 0.99 * u(g);

        CHECK(oracle::rel_err(ev_rate({volts, amps}, f), oracle::ev_rate(volts, amps, f.phi)) <= 1e-9);
        CHECK(oracle::rel_err(icev_rate(v, k, f), oracle::icev_rate(v, k, f.ethanol_share, f.gasoline, f.ethanol)) <=
              1e-9);
        CHECK(oracle::rel_err(fuel_flow_from_maf(maf, f), oracle::maf_to_lph(maf, f.afr, f.fuel_density)) <= 1e-9);
        const double lph = 0.1 + 20.0 * u(g);
        CHECK(oracle::rel_err(efficiency_k(v, lph), v / lph) <= 1e-9);
        CHECK(oracle::rel_err(co2_volume_to_mass(flow, 1800.0, dilution), oracle::co2_mass(flow, 1800.0, dilution)) <=
              1e-9);
    }
}

TEST_CASE("ev_rate is linear in phi")
{
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        EmissionFactors f;
        f.phi = 1.0 + 500.0 * u(g);
        const double c = 0.01 + 50.0 * u(g);
        EmissionFactors scaled = f;
        scaled.phi = c * f.phi;
        const ElectricalSample s{250.0 + 200.0 * u(g), 300.0 * u(g)};
        CHECK(oracle::rel_err(ev_rate(s, scaled), c * ev_rate(s, f)) <= 1e-12);
    }
}

TEST_CASE("blend factor is monotone in the ethanol share")
{
    EmissionFactors f;
    double last = blend_factor(f);
    CHECK(last == doctest::Approx(2310.0));
    for (int p = 1; p <= 100; ++p) {
        f.ethanol_share = p;
        const double b = blend_factor(f);
        CHECK(b < last);
        last = b;
    }
    CHECK(last == doctest::Approx(1510.0));
}

TEST_CASE("factor validation")
{
    EmissionFactors f;
    CHECK_NOTHROW(f.validate());
    f.phi = 0.0;
    CHECK_THROWS_AS(f.validate(), InputError);
    f = {};
    f.ethanol_share = 101.0;
    CHECK_THROWS_AS(f.validate(), InputError);
}

TEST_CASE("parallel series kernels equal the serial reference")
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const EmissionFactors f;
    std::vector<ElectricalSample> samples;
    std::vector<double> v;
    std::vector<double> lph;
    for (int i = 0; i < 5000; ++i) {
        samples.push_back({300.0 + 100.0 * u(g), -50.0 + 200.0 * u(g)});
        v.push_back(i % 7 == 0 ? 0.0 : 120.0 * u(g));
        lph.push_back(i % 11 == 0 ? 0.0 : 15.0 * u(g));
    }
    CHECK(ev_rate_series(samples, f) == ev_rate_series_serial(samples, f));
    CHECK(icev_rate_series(v, lph, f) == icev_rate_series_serial(v, lph, f));
    lph.pop_back();
    CHECK_THROWS_AS(icev_rate_series(v, lph, f), DimensionError);
}
