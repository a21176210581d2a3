#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eccbench/errors.hpp"

namespace eccbench {

/// Utilization fraction, constrained to [0,1].
class Utilization {
public:
    explicit Utilization(double value);

    double value() const { return value_; }

private:
    double value_;
};

/// Curve sampled on the uniform grid {0, 1/M, ..., 1}; evaluation is linear
/// interpolation between the two bracketing samples. Grid points evaluate to
/// their sample value exactly.
class SampledCurve {
public:
    static constexpr std::size_t default_resolution = 100;

    double evaluate(double u) const;
    double evaluate(Utilization u) const { return evaluate(u.value()); }

    /// Grid resolution M; the curve holds M+1 samples.
    std::size_t resolution() const { return samples_.size() - 1; }
    std::span<const double> samples() const { return samples_; }

    bool operator==(const SampledCurve&) const = default;

protected:
    explicit SampledCurve(std::vector<double> samples);

    std::vector<double> samples_;
};

class EfficiencyCurve : public SampledCurve {
public:
    /// Samples must lie in [0,1]; size is grid resolution + 1.
    explicit EfficiencyCurve(std::vector<double> samples);

    static EfficiencyCurve constant(double value, std::size_t resolution = default_resolution);

    /// Grid point with the highest sample; ties break toward lower utilization.
    Utilization argmax_utilization() const;
};

class VarianceCurve : public SampledCurve {
public:
    /// Samples must be non-negative.
    explicit VarianceCurve(std::vector<double> samples);

    static VarianceCurve constant(double value, std::size_t resolution = default_resolution);
};

struct WeightedEfficiency {
    double weight = 0.0;
    const EfficiencyCurve* curve = nullptr;
};

struct WeightedVariance {
    double weight = 0.0;
    const VarianceCurve* curve = nullptr;
};

struct CurveCombineResult {
    EfficiencyCurve curve;
    std::size_t clamped_samples = 0;
};

struct VarianceCombineResult {
    VarianceCurve curve;
    std::size_t clamped_samples = 0;
};

/// Tolerance on the sum-to-one constraint for aggregation weights.
inline constexpr double weight_sum_tolerance = 1e-9;

/// Pointwise convex combination of the children plus a constant offset,
/// clamped back into [0,1]. The number of clamped samples is reported.
CurveCombineResult linear_combine(std::span<const WeightedEfficiency> children, double epsilon);

/// Weighted-sum variance: sum of w^2 * sigma^2 plus pairwise covariance
/// cross terms. covariance(i, j) supplies the scalar covariance between
/// children i and j. Negative samples clamp to 0 and are reported.
template <typename CovarianceFn>
VarianceCombineResult combine_variance(std::span<const WeightedVariance> children,
                                       CovarianceFn&& covariance);

namespace detail {
void check_combine_preconditions(std::span<const double> weights,
                                 std::span<const SampledCurve* const> curves);
} // namespace detail

template <typename CovarianceFn>
VarianceCombineResult combine_variance(std::span<const WeightedVariance> children,
                                       CovarianceFn&& covariance) {
    std::vector<double> weights;
    std::vector<const SampledCurve*> curves;
    weights.reserve(children.size());
    curves.reserve(children.size());
    for (const auto& child : children) {
        weights.push_back(child.weight);
        curves.push_back(child.curve);
    }
    detail::check_combine_preconditions(weights, curves);

    // The covariance part does not depend on utilization: scalar per pair.
    double cross = 0.0;
    for (std::size_t c = 0; c + 1 < children.size(); ++c) {
        for (std::size_t d = c + 1; d < children.size(); ++d) {
            cross += 2.0 * children[c].weight * children[d].weight * covariance(c, d);
        }
    }

    const std::size_t count = children[0].curve->samples().size();
    std::vector<double> out(count, 0.0);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double v = cross;
        for (const auto& child : children) {
            v += child.weight * child.weight * child.curve->samples()[i];
        }
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        }
        out[i] = v;
    }
    return {VarianceCurve(std::move(out)), clamped};
}

} // namespace eccbench
