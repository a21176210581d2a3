#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "eccbench/curve.hpp"
#include "oracle.hpp"

using namespace eccbench;

namespace {

EfficiencyCurve random_curve(oracle::Rng& rng, std::size_t resolution) {
    std::vector<double> samples(resolution + 1);
    for (double& v : samples) {
        v = rng.uniform(0.0, 1.0);
    }
    return EfficiencyCurve(std::move(samples));
}

} // namespace

TEST_CASE("evaluate: constant curve is constant") {
    const auto curve = EfficiencyCurve::constant(0.5);
    CHECK(curve.evaluate(0.37) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("evaluate: identity ramp interpolates linearly") {
    const EfficiencyCurve curve({0.0, 1.0}); // M = 1
    CHECK(curve.evaluate(0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(curve.evaluate(0.0) == 0.0);
    CHECK(curve.evaluate(1.0) == 1.0);
}

TEST_CASE("evaluate: grid points return their sample exactly") {
    oracle::Rng rng(101);
    const auto curve = random_curve(rng, 100);
    for (std::size_t i = 0; i <= 100; ++i) {
        const double u = static_cast<double>(i) / 100.0;
        CHECK(curve.evaluate(u) == curve.samples()[i]);
    }
}

TEST_CASE("evaluate: interpolation stays between adjacent samples") {
    oracle::Rng rng(102);
    const auto curve = random_curve(rng, 20);
    for (int trial = 0; trial < 500; ++trial) {
        const double u = rng.uniform(0.0, 1.0);
        const double v = curve.evaluate(u);
        const auto lo = static_cast<std::size_t>(u * 20.0);
        const auto hi = std::min<std::size_t>(lo + 1, 20);
        CHECK(v >= std::min(curve.samples()[lo], curve.samples()[hi]) - 1e-12);
        CHECK(v <= std::max(curve.samples()[lo], curve.samples()[hi]) + 1e-12);
    }
}

TEST_CASE("evaluate rejects out-of-range utilization") {
    const auto curve = EfficiencyCurve::constant(0.5);
    CHECK_THROWS_AS(curve.evaluate(-0.01), DomainError);
    CHECK_THROWS_AS(curve.evaluate(1.01), DomainError);
    CHECK_THROWS_AS(Utilization(1.5), DomainError);
}

TEST_CASE("curve construction enforces sample ranges") {
    CHECK_THROWS_AS(EfficiencyCurve({0.2, 1.3}), DomainError);
    CHECK_THROWS_AS(EfficiencyCurve({-0.1, 0.3}), DomainError);
    CHECK_THROWS_AS(VarianceCurve({0.1, -0.2}), DomainError);
    CHECK_THROWS_AS(EfficiencyCurve(std::vector<double>{0.5}), DomainError);
}

TEST_CASE("argmax: constant curve ties break to zero utilization") {
    const auto curve = EfficiencyCurve::constant(0.7);
    CHECK(curve.argmax_utilization().value() == 0.0);
}

TEST_CASE("argmax: peak at grid index 81") {
    std::vector<double> samples(101, 0.3);
    samples[81] = 0.9;
    const EfficiencyCurve curve(std::move(samples));
    CHECK(curve.argmax_utilization().value() == doctest::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("argmax agrees with an exhaustive scan") {
    oracle::Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const auto curve = random_curve(rng, 10);
        std::size_t best = 0;
        for (std::size_t i = 1; i <= 10; ++i) {
            if (curve.samples()[i] > curve.samples()[best]) {
                best = i;
            }
        }
        CHECK(curve.argmax_utilization().value() ==
              doctest::Approx(static_cast<double>(best) / 10.0).epsilon(1e-15));
    }
}

TEST_CASE("argmax dominates every grid point") {
    oracle::Rng rng(104);
    const auto curve = random_curve(rng, 100);
    const double best = curve.evaluate(curve.argmax_utilization());
    for (std::size_t i = 0; i <= 100; ++i) {
        CHECK(best >= curve.evaluate(static_cast<double>(i) / 100.0));
    }
}

TEST_CASE("linear_combine: single child with weight 1 is the identity") {
    oracle::Rng rng(105);
    const auto child = random_curve(rng, 50);
    const WeightedEfficiency children[] = {{1.0, &child}};
    const auto result = linear_combine(children, 0.0);
    CHECK(result.clamped_samples == 0);
    CHECK(std::equal(result.curve.samples().begin(), result.curve.samples().end(),
                     child.samples().begin()));
}

TEST_CASE("linear_combine: equal-weight constants average") {
    const auto a = EfficiencyCurve::constant(0.4);
    const auto b = EfficiencyCurve::constant(0.8);
    const WeightedEfficiency children[] = {{0.5, &a}, {0.5, &b}};
    const auto result = linear_combine(children, 0.0);
    for (double v : result.curve.samples()) {
        CHECK(v == doctest::Approx(0.6).epsilon(1e-15));
    }
}

TEST_CASE("linear_combine without clamping is a convex combination") {
    oracle::Rng rng(106);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_curve(rng, 40);
        const auto b = random_curve(rng, 40);
        const auto c = random_curve(rng, 40);
        double w0 = rng.uniform(0.05, 1.0);
        double w1 = rng.uniform(0.05, 1.0);
        double w2 = rng.uniform(0.05, 1.0);
        const double total = w0 + w1 + w2;
        w0 /= total;
        w1 /= total;
        w2 /= total;
        const WeightedEfficiency children[] = {{w0, &a}, {w1, &b}, {w2, &c}};
        const auto result = linear_combine(children, 0.0);
        CHECK(result.clamped_samples == 0);
        for (std::size_t i = 0; i <= 40; ++i) {
            const double lo = std::min({a.samples()[i], b.samples()[i], c.samples()[i]});
            const double hi = std::max({a.samples()[i], b.samples()[i], c.samples()[i]});
            CHECK(result.curve.samples()[i] >= lo - 1e-12);
            CHECK(result.curve.samples()[i] <= hi + 1e-12);
        }
    }
}

TEST_CASE("linear_combine clamps and reports out-of-range samples") {
    const auto high = EfficiencyCurve::constant(0.9, 10);
    const WeightedEfficiency children[] = {{1.0, &high}};
    const auto result = linear_combine(children, 0.2);
    CHECK(result.clamped_samples == 11);
    for (double v : result.curve.samples()) {
        CHECK(v == 1.0);
    }
}

TEST_CASE("an epsilon shift that never clamps leaves the argmax unchanged") {
    oracle::Rng rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> samples(51);
        for (double& v : samples) {
            v = rng.uniform(0.1, 0.7);
        }
        const EfficiencyCurve a(samples);
        const auto b = random_curve(rng, 50);
        const WeightedEfficiency children[] = {{0.7, &a}, {0.3, &b}};
        const auto base = linear_combine(children, 0.0);
        const auto shifted = linear_combine(children, 0.05);
        REQUIRE(shifted.clamped_samples == 0);
        CHECK(base.curve.argmax_utilization().value() ==
              shifted.curve.argmax_utilization().value());
    }
}

TEST_CASE("linear_combine rejects mismatched grids and bad weight sums") {
    const auto a = EfficiencyCurve::constant(0.5, 10);
    const auto b = EfficiencyCurve::constant(0.5, 20);
    const WeightedEfficiency mismatched[] = {{0.5, &a}, {0.5, &b}};
    CHECK_THROWS_AS(linear_combine(mismatched, 0.0), MismatchedGridError);

    const auto c = EfficiencyCurve::constant(0.5, 10);
    const WeightedEfficiency short_sum[] = {{0.5, &a}, {0.4, &c}};
    CHECK_THROWS_AS(linear_combine(short_sum, 0.0), WeightSumError);
}

TEST_CASE("combine_variance: single child passes through") {
    const auto child = VarianceCurve::constant(0.07, 10);
    const WeightedVariance children[] = {{1.0, &child}};
    const auto result = combine_variance(children, [](std::size_t, std::size_t) { return 0.0; });
    CHECK(result.clamped_samples == 0);
    for (double v : result.curve.samples()) {
        CHECK(v == doctest::Approx(0.07).epsilon(1e-15));
    }
}

TEST_CASE("combine_variance: independent equal halves") {
    const auto a = VarianceCurve::constant(0.04);
    const auto b = VarianceCurve::constant(0.04);
    const WeightedVariance children[] = {{0.5, &a}, {0.5, &b}};
    const auto result = combine_variance(children, [](std::size_t, std::size_t) { return 0.0; });
    for (double v : result.curve.samples()) {
        CHECK(v == doctest::Approx(0.02).epsilon(1e-12));
    }
}

TEST_CASE("combine_variance: correlated pair matches the hand expansion") {
    // 0.6^2*0.04 + 0.4^2*0.09 + 2*0.6*0.4*0.01 = 0.0336
    const auto a = VarianceCurve::constant(0.04);
    const auto b = VarianceCurve::constant(0.09);
    const WeightedVariance children[] = {{0.6, &a}, {0.4, &b}};
    const auto result = combine_variance(children, [](std::size_t, std::size_t) { return 0.01; });
    for (double v : result.curve.samples()) {
        CHECK(v == doctest::Approx(0.0336).epsilon(1e-12));
    }
}

TEST_CASE("combine_variance clamps negative results to zero and reports them") {
    const auto a = VarianceCurve::constant(0.01, 10);
    const auto b = VarianceCurve::constant(0.01, 10);
    const WeightedVariance children[] = {{0.5, &a}, {0.5, &b}};
    // Strongly negative covariance pushes the sum below zero.
    const auto result = combine_variance(children, [](std::size_t, std::size_t) { return -0.04; });
    CHECK(result.clamped_samples == 11);
    for (double v : result.curve.samples()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("combine_variance matches a Monte Carlo oracle on correlated draws") {
    oracle::Rng rng(108);
    for (int instance = 0; instance < 10; ++instance) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));
        std::vector<double> weights(n);
        double total = 0.0;
        for (double& w : weights) {
            w = rng.uniform(0.1, 1.0);
            total += w;
        }
        for (double& w : weights) {
            w /= total;
        }
        std::vector<double> variances(n);
        for (double& v : variances) {
            v = rng.uniform(0.005, 0.2);
        }
        const auto sigma = oracle::random_covariance(variances, rng);

        std::vector<VarianceCurve> curves;
        curves.reserve(n);
        for (double v : variances) {
            curves.push_back(VarianceCurve::constant(v, 4));
        }
        std::vector<WeightedVariance> children;
        children.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            children.push_back({weights[i], &curves[i]});
        }
        const auto result = combine_variance(
            children, [&](std::size_t c, std::size_t d) { return sigma[c * n + d]; });

        const double expected = oracle::weighted_sum_variance_mc(
            weights, sigma, 100000, 4242 + static_cast<std::uint64_t>(instance));
        CHECK(result.curve.samples()[0] ==
              doctest::Approx(expected).epsilon(0.02)); // 2% relative
    }
}
