#include "eccbench/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace eccbench {

namespace {

// Guards divisions in the candidate scores.
constexpr double score_guard = 1e-9;

// Sum over all directed paths of the edge-weight products, per reachable
// descendant of `id`.
void accumulate_flattened(const StateGraph& graph, const std::string& id, double weight,
                          std::map<std::string, double>& flattened) {
    for (const auto* edge : graph.outgoing(id)) {
        const double w = weight * edge->weight;
        flattened[edge->to] += w;
        accumulate_flattened(graph, edge->to, w, flattened);
    }
}

double variance_at(const AnnotatedGraph& annotated, const ComponentNode& node,
                   double fallback_utilization) {
    const auto& variance = annotated.variance_of(node.id);
    const double u = node.current_utilization.value_or(fallback_utilization);
    return variance.evaluate(u);
}

} // namespace

VariancePoint variance_point_from_string(std::string_view name) {
    if (name == "current") {
        return VariancePoint::current;
    }
    if (name == "optimal") {
        return VariancePoint::optimal;
    }
    if (name == "integrated") {
        return VariancePoint::integrated;
    }
    throw DomainError("unknown variance point: " + std::string(name));
}

const char* to_string(VariancePoint point) {
    switch (point) {
    case VariancePoint::current: return "current";
    case VariancePoint::optimal: return "optimal";
    case VariancePoint::integrated: return "integrated";
    }
    return "unknown";
}

const char* to_string(FitnessAction action) {
    switch (action) {
    case FitnessAction::no_change: return "no_change";
    case FitnessAction::prune: return "prune";
    case FitnessAction::refine: return "refine";
    }
    return "unknown";
}

FitnessRecommendation assess(const AnnotatedGraph& annotated, const FitnessTarget& target) {
    const auto& graph = annotated.graph();
    const auto* node = graph.find(target.node);
    if (!node) {
        throw UnknownNodeError("no component named " + target.node);
    }
    if (target.variance_min > target.variance_max) {
        throw DomainError("variance_min exceeds variance_max");
    }

    const auto& variance = annotated.variance_of(target.node);
    double v = 0.0;
    double current_u = 0.0;
    switch (target.point) {
    case VariancePoint::current:
        if (!node->current_utilization) {
            throw MissingUtilizationError("component " + target.node +
                                          " has no current utilization");
        }
        current_u = *node->current_utilization;
        v = variance.evaluate(current_u);
        break;
    case VariancePoint::optimal:
        current_u = annotated.curve_of(target.node).argmax_utilization().value();
        v = variance.evaluate(current_u);
        break;
    case VariancePoint::integrated: {
        const auto samples = variance.samples();
        v = std::accumulate(samples.begin(), samples.end(), 0.0) /
            static_cast<double>(samples.size());
        current_u = node->current_utilization.value_or(0.0);
        break;
    }
    }

    FitnessRecommendation rec;
    rec.target_variance = v;

    if (v >= target.variance_min && v <= target.variance_max) {
        rec.action = FitnessAction::no_change;
        rec.rule = 1;
        std::ostringstream msg;
        msg << "variance " << v << " of " << target.node << " is inside ["
            << target.variance_min << ", " << target.variance_max << "]; keep the model";
        rec.rationale = msg.str();
        return rec;
    }

    std::map<std::string, double> flattened;
    accumulate_flattened(graph, target.node, 1.0, flattened);

    const bool below = v < target.variance_min;
    for (const auto& [id, weight] : flattened) {
        const auto* descendant = graph.find(id);
        if (!descendant || !annotated.has_curves(id)) {
            continue;
        }
        if (below && descendant->kind != ComponentKind::measurable) {
            continue; // pruning removes measurements, composites stay
        }
        FitnessCandidate candidate;
        candidate.id = id;
        candidate.measurement_cost = descendant->measurement_cost;
        candidate.variance_contribution =
            weight * weight * variance_at(annotated, *descendant, current_u);
        candidate.score = below
            ? candidate.measurement_cost / (candidate.variance_contribution + score_guard)
            : candidate.variance_contribution / (candidate.measurement_cost + score_guard);
        rec.candidates.push_back(std::move(candidate));
    }
    std::stable_sort(rec.candidates.begin(), rec.candidates.end(),
                     [](const FitnessCandidate& a, const FitnessCandidate& b) {
                         if (a.score != b.score) {
                             return a.score > b.score;
                         }
                         return a.id < b.id;
                     });

    std::ostringstream msg;
    if (below) {
        rec.action = FitnessAction::prune;
        rec.rule = 2;
        msg << "variance " << v << " of " << target.node << " is below "
            << target.variance_min
            << "; prune or simplify costly low-variance measurements";
    } else {
        rec.action = FitnessAction::refine;
        rec.rule = 3;
        msg << "variance " << v << " of " << target.node << " exceeds "
            << target.variance_max
            << "; refine cheap high-variance measurements";
    }
    rec.rationale = msg.str();
    return rec;
}

PruneResult apply_prune(const StateGraph& graph, std::string_view node_id) {
    const auto* node = graph.find(node_id);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(node_id));
    }
    if (!graph.outgoing(node_id).empty()) {
        throw DomainError("only measurable components can be pruned: " + std::string(node_id));
    }

    const auto parents = graph.incoming(node_id);
    for (const auto* edge : parents) {
        if (graph.outgoing(edge->from).size() < 2) {
            throw LastChildError("pruning " + std::string(node_id) + " would orphan " +
                                 edge->from);
        }
    }

    std::vector<ComponentNode> nodes;
    for (const auto& n : graph.nodes()) {
        if (n.id != node_id) {
            nodes.push_back(n);
        }
    }

    // Only the pruned node's parents lose weight and need renormalizing.
    std::map<std::string, double> parent_remaining;
    for (const auto* edge : parents) {
        parent_remaining[edge->from] = 0.0;
    }
    for (const auto& edge : graph.edges()) {
        if (edge.to != node_id && parent_remaining.contains(edge.from)) {
            parent_remaining[edge.from] += edge.weight;
        }
    }

    PruneResult result{StateGraph{}, {}};
    std::vector<UtilizationEdge> edges;
    for (const auto& edge : graph.edges()) {
        if (edge.to == node_id || edge.from == node_id) {
            continue;
        }
        UtilizationEdge kept = edge;
        auto it = parent_remaining.find(edge.from);
        if (it != parent_remaining.end() && it->second > 0.0) {
            kept.weight /= it->second;
        }
        edges.push_back(kept);
    }

    for (const auto& [parent, sum] : parent_remaining) {
        result.recalibrate_epsilon.push_back(parent);
    }

    CovarianceTable covariances;
    for (const auto& [key, value] : graph.covariances().entries()) {
        if (key.first != node_id && key.second != node_id) {
            covariances.set(key.first, key.second, value);
        }
    }

    result.graph = StateGraph(graph.state_id(), std::move(nodes), std::move(edges),
                              std::move(covariances));
    return result;
}

} // namespace eccbench
