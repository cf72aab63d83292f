#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "scnn/sc_core.hpp"

using namespace scnn;

TEST_CASE("decay factor is the charge-sharing ratio")
{
    CHECK(decay_factor(75.0, 5.0) == doctest::Approx(0.9375));
    CHECK(decay_factor(5.0, 5.0) == doctest::Approx(0.5));
    CHECK(decay_factor(100.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(decay_factor(0.0, 5.0), std::domain_error);
    CHECK_THROWS_AS(decay_factor(75.0, -1.0), std::domain_error);
}

TEST_CASE("leak period from tau")
{
    CHECK(leak_period_from_tau(12.0, 0.9375) == doctest::Approx(0.774462).epsilon(1e-4));
    CHECK(leak_period_from_tau(9.607, 0.9375) == doctest::Approx(0.62).epsilon(1e-3));
    CHECK(leak_period_from_tau(100.0, 0.999999) < 1e-3); // no-leak limit
    CHECK_THROWS_AS(leak_period_from_tau(12.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(leak_period_from_tau(12.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(leak_period_from_tau(-1.0, 0.5), std::domain_error);
}

TEST_CASE("tau from divider reconstructs the configurable ranges")
{
    CHECK(*tau_from_divider(1, TickGranularity::PerEighthCycle) ==
          doctest::Approx(1.2008).epsilon(1e-3));
    CHECK(*tau_from_divider(62, TickGranularity::PerEighthCycle) ==
          doctest::Approx(74.45).epsilon(1e-3));
    CHECK(*tau_from_divider(63, TickGranularity::PerCycle) ==
          doctest::Approx(605.2).epsilon(1e-3));
    CHECK(*tau_from_divider(1, TickGranularity::PerCycle) ==
          doctest::Approx(9.6067).epsilon(1e-3));
    CHECK_FALSE(tau_from_divider(0, TickGranularity::PerCycle).has_value());
    CHECK_THROWS_AS(tau_from_divider(64, TickGranularity::PerCycle),
            std::out_of_range);
}

TEST_CASE("divider/tau round trip is the identity on codes")
{
    for (auto g : {TickGranularity::PerCycle, TickGranularity::PerEighthCycle}) {
        for (int code = 1; code <= 63; ++code) {
            const double tau = *tau_from_divider(code, g);
            CHECK(divider_from_tau(tau, g) == code);
        }
    }
}

TEST_CASE("apply_leak_event decays toward the target")
{
    CHECK(apply_leak_event(AnalogValue::from_mv(100.0), {}).mv() ==
          doctest::Approx(93.75));
    CHECK(apply_leak_event({}, {}).raw == 0); // fixed point

    // resource recovery toward R_max = 1 (dimensionless in the same Q16)
    const AnalogValue r0{static_cast<std::int32_t>(std::llround(0.52 * fx_one))};
    const AnalogValue full{fx_one};
    const AnalogValue r1 = apply_leak_event(r0, full);
    CHECK(std::abs(r1.raw - std::llround(0.55 * fx_one)) <= 2);

    // generic exact-rational variant
    CHECK(apply_leak_event(AnalogValue::from_mv(10.0), 1, 2, {}).mv() ==
          doctest::Approx(5.0));
    CHECK_THROWS_AS(apply_leak_event({}, 3, 2, {}), std::domain_error);
}

TEST_CASE("geometric decay is bit-exact against the raw recursion")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int32_t> dist(-fx_rail, fx_rail);
    for (int trial = 0; trial < 20; ++trial) {
        const std::int32_t v0 = dist(rng);
        AnalogValue v{v0};
        std::int32_t ref = v0;
        for (int k = 0; k < 10000; ++k) {
            v = apply_leak_event(v, {});
            ref = static_cast<std::int32_t>(
                static_cast<std::int64_t>(ref) * 15 / 16);
        }
        CHECK(v.raw == ref);
    }
    // exactly representable closed form
    AnalogValue v{1 << 20}; // divisible by 16^5
    for (int k = 1; k <= 5; ++k) {
        v = apply_leak_event(v, {});
        const double expect = std::pow(0.9375, k) * (1 << 20);
        CHECK(v.raw == static_cast<std::int32_t>(expect));
    }
}

TEST_CASE("DAC quantization")
{
    CHECK(quantize_dac(0).mv() == doctest::Approx(-250.0));
    CHECK(quantize_dac(127).mv() == doctest::Approx(250.0));
    CHECK(quantize_dac(0).raw == -fx_rail);
    CHECK(quantize_dac(127).raw == fx_rail);
    CHECK(quantize_dac(63).mv() == doctest::Approx(-1.9685).epsilon(1e-3));
    CHECK_THROWS_AS(quantize_dac(128), std::out_of_range);
    CHECK_THROWS_AS(quantize_dac(-1), std::out_of_range);

    // monotone increasing over the full code range
    for (int code = 1; code <= 127; ++code) {
        CHECK(quantize_dac(code).raw > quantize_dac(code - 1).raw);
    }
}

TEST_CASE("leak schedule fires every divider ticks")
{
    LeakSchedule off{0, 0};
    CHECK(off.advance(1000000) == 0);

    LeakSchedule s{5, 0};
    int events = 0;
    for (int t = 1; t <= 100; ++t) {
        const int e = s.advance(1);
        events += e;
        CHECK(e == (t % 5 == 0 ? 1 : 0));
    }
    CHECK(events == 20);

    // bulk advance equals repeated single-tick advance
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int code = static_cast<int>(rng() % 63) + 1;
        LeakSchedule a{code, 0}, b{code, 0};
        int ea = 0, eb = 0;
        for (int step = 0; step < 50; ++step) {
            const int n = static_cast<int>(rng() % 17);
            ea += a.advance(n);
            for (int i = 0; i < n; ++i) {
                eb += b.advance(1);
            }
        }
        CHECK(ea == eb);
        CHECK(a.phase == b.phase);
    }
}

TEST_CASE("unit quantization covers 0..0.984")
{
    CHECK(unit_quant(0) == 0);
    CHECK(unit_quant(63) == 63 * 1024);
    CHECK(fx_to_mv(unit_quant(63)) == doctest::Approx(0.984375));
}
