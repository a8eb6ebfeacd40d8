#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "detproj/gronwall.hpp"

using namespace detproj;
using gronwall::TimeSeries;

TEST_CASE("hypotheses for constant coefficients") {
    auto alpha = TimeSeries::sample([](double) { return 1.0; }, 0.0, 1e-2, 4001);
    auto beta = TimeSeries::sample([](double) { return 0.0; }, 0.0, 1e-2, 4001);
    auto rep = gronwall::check_hypotheses(alpha, beta, 3.0);
    CHECK_THAT(rep.m, Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK(rep.M == 0.0);
    CHECK(rep.beta_plus_limit == 0.0);
    CHECK(rep.hypotheses_met[0]);
    CHECK(rep.hypotheses_met[1]);
    CHECK(rep.hypotheses_met[2]);
}

TEST_CASE("oscillatory alpha averages out over the exact period") {
    // stride divides 2 pi, so the trapezoid window integral of sin vanishes
    const double stride = 2.0 * pi / 1000.0;
    auto alpha = TimeSeries::sample([](double t) { return 1.0 + std::sin(t); }, 0.0, stride,
                                    20001);
    auto beta = TimeSeries::sample([](double) { return 0.0; }, 0.0, stride, 20001);
    auto rep = gronwall::check_hypotheses(alpha, beta, 2.0 * pi);
    CHECK_THAT(rep.m, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(rep.M == 0.0);
}

TEST_CASE("zero alpha fails the positive-mean hypothesis") {
    auto alpha = TimeSeries::sample([](double) { return 0.0; }, 0.0, 1e-2, 4001);
    auto beta = TimeSeries::sample([](double) { return 0.0; }, 0.0, 1e-2, 4001);
    auto rep = gronwall::check_hypotheses(alpha, beta, 3.0);
    CHECK(rep.m == 0.0);
    CHECK_FALSE(rep.hypotheses_met[0]);
}

TEST_CASE("too-short series are rejected") {
    auto alpha = TimeSeries::sample([](double) { return 1.0; }, 0.0, 1e-2, 200);
    auto beta = alpha;
    CHECK_THROWS_AS(gronwall::check_hypotheses(alpha, beta, 1.5), std::invalid_argument);
}

TEST_CASE("envelope integration matches closed forms") {
    const double stride = 1e-3;
    const std::size_t n = 10001;
    auto one = TimeSeries::sample([](double) { return 1.0; }, 0.0, stride, n);
    auto zero = TimeSeries::sample([](double) { return 0.0; }, 0.0, stride, n);
    auto expb = TimeSeries::sample([](double t) { return std::exp(-t); }, 0.0, stride, n);

    auto y1 = gronwall::integrate_inequality(one, expb, 1.0);
    for (std::size_t i = 0; i < n; i += 500) {
        double t = y1.time(i);
        CHECK_THAT(y1.values[i], Catch::Matchers::WithinAbs(std::exp(-t) * (1.0 + t), 1e-10));
    }
    CHECK_THAT(y1.values.back(), Catch::Matchers::WithinAbs(std::exp(-10.0) * 11.0, 1e-10));
    CHECK_THAT(y1.values.back(), Catch::Matchers::WithinRel(4.9939922e-4, 1e-5));

    auto y2 = gronwall::integrate_inequality(one, zero, 1.0);
    for (std::size_t i = 0; i < n; i += 500)
        CHECK_THAT(y2.values[i], Catch::Matchers::WithinAbs(std::exp(-y2.time(i)), 1e-12));

    auto osc = TimeSeries::sample([](double t) { return 1.0 + std::sin(t); }, 0.0, stride, n);
    auto y3 = gronwall::integrate_inequality(osc, zero, 1.0);
    for (std::size_t i = 0; i < n; i += 500) {
        double t = y3.time(i);
        CHECK_THAT(y3.values[i],
                   Catch::Matchers::WithinAbs(std::exp(-t - 1.0 + std::cos(t)), 1e-10));
    }

    CHECK_THROWS_AS(gronwall::integrate_inequality(one, zero, -1.0), std::invalid_argument);
}

TEST_CASE("envelope dominates any series satisfying the inequality") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double stride = 2e-3;
    const std::size_t n = 5001;
    for (int trial = 0; trial < 25; ++trial) {
        double a0 = 0.3 + uni(rng), a1 = 0.5 * a0 * uni(rng), w = 0.5 + 3.0 * uni(rng);
        double b0 = uni(rng), lam = 0.2 + uni(rng);
        auto alpha = TimeSeries::sample(
            [=](double t) { return a0 + a1 * std::sin(w * t); }, 0.0, stride, n);
        auto beta = TimeSeries::sample(
            [=](double t) { return b0 * std::exp(-lam * t); }, 0.0, stride, n);
        // slack turns the inequality strict: y' = -alpha y + beta - s, s >= 0
        double s0 = 0.5 * uni(rng);
        auto beta_slack = TimeSeries::sample(
            [=](double t) {
                return b0 * std::exp(-lam * t) - s0 * std::exp(-t) * (1.0 + std::cos(t));
            },
            0.0, stride, n);
        auto env = gronwall::integrate_inequality(alpha, beta, 1.0);
        auto y = gronwall::integrate_inequality(alpha, beta_slack, 1.0);
        for (std::size_t i = 0; i < n; i += 97)
            CHECK(y.values[i] <= env.values[i] + 1e-10);
    }
}

TEST_CASE("envelope scales linearly in (beta, y0)") {
    const double stride = 1e-3;
    const std::size_t n = 4001;
    auto alpha = TimeSeries::sample([](double t) { return 1.0 + 0.3 * std::sin(2.0 * t); }, 0.0,
                                    stride, n);
    auto beta = TimeSeries::sample([](double t) { return std::exp(-0.5 * t); }, 0.0, stride, n);
    auto y = gronwall::integrate_inequality(alpha, beta, 1.0);
    const double c = 3.75;
    auto beta_c = beta;
    for (auto& v : beta_c.values) v *= c;
    auto y_c = gronwall::integrate_inequality(alpha, beta_c, c);
    for (std::size_t i = 0; i < n; i += 101)
        CHECK_THAT(y_c.values[i], Catch::Matchers::WithinRel(c * y.values[i], 1e-12));
}

TEST_CASE("tail report ignores the transient") {
    const double stride = 5e-3;
    const std::size_t n = 20001;
    auto alpha = TimeSeries::sample([](double t) { return 1.0 + 0.4 * std::sin(t); }, 0.0,
                                    stride, n);
    auto beta = TimeSeries::sample([](double t) { return std::exp(-0.3 * t); }, 0.0, stride, n);
    auto rep = gronwall::check_hypotheses(alpha, beta, 5.0);
    auto alpha2 = alpha;
    auto beta2 = beta;
    for (std::size_t i = 0; i < n / 10; ++i) {
        alpha2.values[i] = -50.0;  // violent transient in the first 10%
        beta2.values[i] = 40.0;
    }
    auto rep2 = gronwall::check_hypotheses(alpha2, beta2, 5.0);
    CHECK(rep.m == rep2.m);
    CHECK(rep.M == rep2.M);
    CHECK(rep.beta_plus_limit == rep2.beta_plus_limit);
}

TEST_CASE("conclusion verdicts") {
    const double stride = 5e-3;
    const std::size_t n = 4001;  // horizon 20
    auto decay = TimeSeries::sample([](double t) { return std::exp(-t); }, 0.0, stride, n);
    CHECK(gronwall::verify_conclusion(decay, 2.0).passed);
    auto flat = TimeSeries::sample([](double) { return 1.0; }, 0.0, stride, n);
    CHECK_FALSE(gronwall::verify_conclusion(flat, 2.0).passed);
    auto slow = TimeSeries::sample([](double t) { return std::exp(-t) * (1.0 + t); }, 0.0,
                                   stride, n);
    CHECK(gronwall::verify_conclusion(slow, 2.0).passed);
    auto neg = TimeSeries::sample([](double t) { return -t; }, 0.0, stride, n);
    CHECK_THROWS_AS(gronwall::verify_conclusion(neg, 2.0), std::invalid_argument);
}

TEST_CASE("uniform-stride validation") {
    std::vector<double> times{0.0, 0.1, 0.25};
    std::vector<double> values{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(TimeSeries::from_times(times, values), std::invalid_argument);
    times = {0.0, 0.1, 0.2};
    auto ts = TimeSeries::from_times(times, values);
    CHECK_THAT(ts.stride, Catch::Matchers::WithinAbs(0.1, 1e-15));
}
