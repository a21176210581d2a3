#include "eccbench/aggregate.hpp"

#include <algorithm>
#include <cmath>

namespace eccbench {

AnnotatedGraph::AnnotatedGraph(StateGraph graph,
                               std::map<std::string, EfficiencyCurve> derived_curves,
                               std::map<std::string, VarianceCurve> derived_variances,
                               std::vector<std::string> underivable,
                               std::size_t clamped_samples)
    : graph_(std::move(graph)),
      derived_curves_(std::move(derived_curves)),
      derived_variances_(std::move(derived_variances)),
      underivable_(std::move(underivable)),
      clamped_samples_(clamped_samples) {}

bool AnnotatedGraph::has_curves(std::string_view id) const {
    const auto* node = graph_.find(id);
    if (!node) {
        return false;
    }
    if (node->curve && node->variance) {
        return true;
    }
    return derived_curves_.contains(std::string(id)) &&
           derived_variances_.contains(std::string(id));
}

const EfficiencyCurve& AnnotatedGraph::curve_of(std::string_view id) const {
    const auto* node = graph_.find(id);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    if (node->curve) {
        return *node->curve;
    }
    auto it = derived_curves_.find(std::string(id));
    if (it == derived_curves_.end()) {
        throw DomainError("no derived efficiency curve for " + std::string(id));
    }
    return it->second;
}

const VarianceCurve& AnnotatedGraph::variance_of(std::string_view id) const {
    const auto* node = graph_.find(id);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    if (node->variance) {
        return *node->variance;
    }
    auto it = derived_variances_.find(std::string(id));
    if (it == derived_variances_.end()) {
        throw DomainError("no derived variance curve for " + std::string(id));
    }
    return it->second;
}

bool AnnotatedGraph::is_derived(std::string_view id) const {
    return derived_curves_.contains(std::string(id));
}

namespace {

// Aggregated-weight sums below this are treated as a degenerate composite
// rather than a weight-sum error (arises from all-absent merged edges).
constexpr double zero_weight_threshold = 1e-12;

void check_derivable(const StateGraph& graph) {
    const auto report = validate(graph);
    for (const auto& violation : report.violations) {
        if (violation.kind == ViolationKind::weight_sum) {
            // Tolerated only when the node's aggregate weight is ~0; such
            // nodes are skipped and reported as underivable.
            double sum = 0.0;
            for (const auto* edge : graph.outgoing(violation.ids.front())) {
                sum += edge->weight;
            }
            if (sum < zero_weight_threshold) {
                continue;
            }
        }
        throw InvalidGraphError("cannot derive composites:\n" + report.to_string());
    }
}

} // namespace

AnnotatedGraph derive_composites(const StateGraph& graph) {
    check_derivable(graph);

    std::map<std::string, EfficiencyCurve> curves;
    std::map<std::string, VarianceCurve> variances;
    std::vector<std::string> underivable;
    std::size_t clamped = 0;

    const auto order = topological_order(graph);
    for (const auto& id : order) {
        const auto out = graph.outgoing(id);
        if (out.empty()) {
            continue; // measurable: passes through unchanged
        }
        const auto* node = graph.find(id);

        double weight_sum = 0.0;
        bool blocked = false;
        for (const auto* edge : out) {
            weight_sum += edge->weight;
            const auto* child = graph.find(edge->to);
            const bool child_ready = (child->curve && child->variance) ||
                                     (curves.contains(edge->to) && variances.contains(edge->to));
            if (!child_ready) {
                blocked = true;
            }
        }
        if (weight_sum < zero_weight_threshold || blocked) {
            underivable.push_back(id);
            continue;
        }

        std::vector<WeightedEfficiency> eff;
        std::vector<WeightedVariance> var;
        std::vector<std::string_view> child_ids;
        eff.reserve(out.size());
        var.reserve(out.size());
        for (const auto* edge : out) {
            const auto* child = graph.find(edge->to);
            const EfficiencyCurve& c =
                child->curve ? *child->curve : curves.at(edge->to);
            const VarianceCurve& v =
                child->variance ? *child->variance : variances.at(edge->to);
            eff.push_back({edge->weight, &c});
            var.push_back({edge->weight, &v});
            child_ids.push_back(edge->to);
        }

        auto combined = linear_combine(eff, node->epsilon);
        clamped += combined.clamped_samples;
        curves.emplace(id, std::move(combined.curve));

        auto combined_var = combine_variance(var, [&](std::size_t c, std::size_t d) {
            return graph.covariances().get(child_ids[c], child_ids[d]);
        });
        clamped += combined_var.clamped_samples;
        variances.emplace(id, std::move(combined_var.curve));
    }

    return AnnotatedGraph(graph, std::move(curves), std::move(variances),
                          std::move(underivable), clamped);
}

double calibrate_epsilon(const StateGraph& graph, std::string_view parent,
                         const EfficiencyCurve& observed) {
    const auto* node = graph.find(parent);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(parent));
    }
    const auto out = graph.outgoing(parent);
    if (out.empty()) {
        throw NotCompositeError(std::string(parent) + " has no outgoing edges");
    }

    const auto annotated = derive_composites(graph);

    const std::size_t count = observed.samples().size();
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double sum = 0.0;
        for (const auto* edge : out) {
            const auto& child = annotated.curve_of(edge->to);
            if (child.samples().size() != count) {
                throw MismatchedGridError("observed curve grid does not match the graph's curves");
            }
            sum += edge->weight * child.samples()[i];
        }
        total += observed.samples()[i] - sum;
    }
    return total / static_cast<double>(count);
}

} // namespace eccbench
