#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eccbench/graph.hpp"

namespace eccbench {

/// A state graph plus the efficiency and variance curves of its composite
/// nodes, filled in children-first. Measurable nodes pass through unchanged.
class AnnotatedGraph {
public:
    AnnotatedGraph(StateGraph graph,
                   std::map<std::string, EfficiencyCurve> derived_curves,
                   std::map<std::string, VarianceCurve> derived_variances,
                   std::vector<std::string> underivable = {},
                   std::size_t clamped_samples = 0);

    const StateGraph& graph() const { return graph_; }

    bool has_curves(std::string_view id) const;
    const EfficiencyCurve& curve_of(std::string_view id) const;
    const VarianceCurve& variance_of(std::string_view id) const;
    bool is_derived(std::string_view id) const;

    /// Composites whose curves could not be derived (zero aggregated weight
    /// or an underivable child); excluded from gap analysis.
    std::span<const std::string> underivable() const { return underivable_; }
    std::size_t clamped_samples() const { return clamped_samples_; }

private:
    StateGraph graph_;
    std::map<std::string, EfficiencyCurve> derived_curves_;
    std::map<std::string, VarianceCurve> derived_variances_;
    std::vector<std::string> underivable_;
    std::size_t clamped_samples_ = 0;
};

/// Derive every composite's efficiency and variance curve by weighted
/// aggregation over its children, processed children-first. Covariance cross
/// terms come from the graph's covariance table.
AnnotatedGraph derive_composites(const StateGraph& graph);

/// Scalar offset minimizing the mean squared pointwise difference between
/// the composite's pre-clamp aggregate and `observed`: the grid mean of
/// (observed - weighted child sum).
double calibrate_epsilon(const StateGraph& graph, std::string_view parent,
                         const EfficiencyCurve& observed);

} // namespace eccbench
