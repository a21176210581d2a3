#include "eccbench/curve.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace eccbench {

namespace {

// Snap tolerance on the scaled coordinate u*M. Grid points passed as k/M in
// floating point land within a few ulps of an integer; anything closer than
// this is treated as the grid sample itself.
constexpr double grid_snap = 1e-9;

} // namespace

Utilization::Utilization(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "utilization " << value << " outside [0,1]";
        throw DomainError(msg.str());
    }
}

SampledCurve::SampledCurve(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) {
        throw DomainError("curve needs at least 2 samples (resolution >= 1)");
    }
}

double SampledCurve::evaluate(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        std::ostringstream msg;
        msg << "utilization " << u << " outside [0,1]";
        throw DomainError(msg.str());
    }
    const double t = u * static_cast<double>(resolution());
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < grid_snap) {
        return samples_[static_cast<std::size_t>(nearest)];
    }
    const auto lo = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(lo);
    return samples_[lo] + frac * (samples_[lo + 1] - samples_[lo]);
}

EfficiencyCurve::EfficiencyCurve(std::vector<double> samples)
    : SampledCurve(std::move(samples)) {
    for (double v : samples_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream msg;
            msg << "efficiency sample " << v << " outside [0,1]";
            throw DomainError(msg.str());
        }
    }
}

EfficiencyCurve EfficiencyCurve::constant(double value, std::size_t resolution) {
    return EfficiencyCurve(std::vector<double>(resolution + 1, value));
}

Utilization EfficiencyCurve::argmax_utilization() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (samples_[i] > samples_[best]) {
            best = i;
        }
    }
    return Utilization(static_cast<double>(best) / static_cast<double>(resolution()));
}

VarianceCurve::VarianceCurve(std::vector<double> samples)
    : SampledCurve(std::move(samples)) {
    for (double v : samples_) {
        if (!(v >= 0.0)) {
            std::ostringstream msg;
            msg << "variance sample " << v << " is negative";
            throw DomainError(msg.str());
        }
    }
}

VarianceCurve VarianceCurve::constant(double value, std::size_t resolution) {
    return VarianceCurve(std::vector<double>(resolution + 1, value));
}

namespace detail {

void check_combine_preconditions(std::span<const double> weights,
                                 std::span<const SampledCurve* const> curves) {
    if (curves.empty()) {
        throw DomainError("combination needs at least one child");
    }
    const std::size_t res = curves[0]->resolution();
    for (const auto* curve : curves) {
        if (curve->resolution() != res) {
            std::ostringstream msg;
            msg << "grid resolution mismatch: " << curve->resolution() << " vs " << res;
            throw MismatchedGridError(msg.str());
        }
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > weight_sum_tolerance) {
        std::ostringstream msg;
        msg << "weights sum to " << sum << ", expected 1";
        throw WeightSumError(msg.str());
    }
}

} // namespace detail

CurveCombineResult linear_combine(std::span<const WeightedEfficiency> children, double epsilon) {
    std::vector<double> weights;
    std::vector<const SampledCurve*> curves;
    weights.reserve(children.size());
    curves.reserve(children.size());
    for (const auto& child : children) {
        weights.push_back(child.weight);
        curves.push_back(child.curve);
    }
    detail::check_combine_preconditions(weights, curves);

    const std::size_t count = children[0].curve->samples().size();
    std::vector<double> out(count, 0.0);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double v = epsilon;
        for (const auto& child : children) {
            v += child.weight * child.curve->samples()[i];
        }
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        } else if (v > 1.0) {
            v = 1.0;
            ++clamped;
        }
        out[i] = v;
    }
    return {EfficiencyCurve(std::move(out)), clamped};
}

} // namespace eccbench
