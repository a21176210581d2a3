#include "eccbench/merge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace eccbench {

CurveMode curve_mode_from_string(std::string_view name) {
    if (name == "rederive") {
        return CurveMode::rederive;
    }
    if (name == "average") {
        return CurveMode::average;
    }
    throw DomainError("unknown curve mode: " + std::string(name));
}

const char* to_string(CurveMode mode) {
    return mode == CurveMode::rederive ? "rederive" : "average";
}

namespace {

constexpr double zero_weight_threshold = 1e-12;

// Copy of `state` with each composite's outgoing weights rescaled to sum to
// 1, so per-state derivation stays well-defined on partial observations.
StateGraph per_state_normalized(const StateGraph& state) {
    std::map<std::string, double> sums;
    for (const auto& edge : state.edges()) {
        sums[edge.from] += edge.weight;
    }
    std::vector<UtilizationEdge> edges(state.edges().begin(), state.edges().end());
    for (auto& edge : edges) {
        const double sum = sums[edge.from];
        if (sum > zero_weight_threshold) {
            edge.weight /= sum;
        }
    }
    return StateGraph(state.state_id(), {state.nodes().begin(), state.nodes().end()},
                      std::move(edges), state.covariances());
}

std::vector<double> scaled_sum(const std::vector<const std::vector<double>*>& parts,
                               std::size_t count, double denom) {
    std::vector<double> out(count, 0.0);
    for (const auto* part : parts) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] += (*part)[i];
        }
    }
    for (double& v : out) {
        v /= denom;
    }
    return out;
}

} // namespace

MergedGraph merge(std::span<const StateGraph> states, CurveMode mode) {
    if (states.empty()) {
        throw EmptyInputError("merge needs at least one state graph");
    }

    // Fixed processing order makes the result independent of input order.
    std::vector<const StateGraph*> ordered;
    ordered.reserve(states.size());
    for (const auto& state : states) {
        ordered.push_back(&state);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const StateGraph* a, const StateGraph* b) { return a->state_id() < b->state_id(); });

    const double n = static_cast<double>(ordered.size());

    std::size_t resolution = 0;
    for (const auto* state : ordered) {
        for (const auto& node : state->nodes()) {
            if (node.curve) {
                if (resolution == 0) {
                    resolution = node.curve->resolution();
                } else if (node.curve->resolution() != resolution) {
                    throw MismatchedGridError("state graphs use different grid resolutions");
                }
            }
        }
    }

    std::set<std::string> node_ids;
    std::set<std::pair<std::string, std::string>> edge_keys;
    for (const auto* state : ordered) {
        for (const auto& node : state->nodes()) {
            node_ids.insert(node.id);
        }
        for (const auto& edge : state->edges()) {
            edge_keys.insert({edge.from, edge.to});
        }
    }

    // Per-state derivation is only needed when composite curves are averaged.
    std::vector<AnnotatedGraph> annotated_states;
    if (mode == CurveMode::average) {
        annotated_states.reserve(ordered.size());
        for (const auto* state : ordered) {
            annotated_states.push_back(derive_composites(per_state_normalized(*state)));
        }
    }

    std::vector<ComponentNode> merged_nodes;
    std::map<std::string, EfficiencyCurve> averaged_curves;
    std::map<std::string, VarianceCurve> averaged_variances;

    for (const auto& id : node_ids) {
        const bool is_composite = std::any_of(
            edge_keys.begin(), edge_keys.end(),
            [&](const auto& key) { return key.first == id; });

        ComponentNode merged;
        merged.id = id;
        merged.kind = is_composite ? ComponentKind::composite : ComponentKind::measurable;

        std::vector<const std::vector<double>*> curve_parts;
        std::vector<const std::vector<double>*> variance_parts;
        std::deque<std::vector<double>> storage; // stable addresses for the parts
        double epsilon_sum = 0.0;
        double cost_sum = 0.0;
        std::size_t present = 0;
        double util_sum = 0.0;
        std::size_t util_count = 0;

        for (std::size_t s = 0; s < ordered.size(); ++s) {
            const auto* node = ordered[s]->find(id);
            if (!node) {
                continue;
            }
            ++present;
            epsilon_sum += node->epsilon;
            cost_sum += node->measurement_cost;
            if (node->current_utilization) {
                util_sum += *node->current_utilization;
                ++util_count;
            }
            if (!is_composite) {
                if (node->curve) {
                    storage.emplace_back(node->curve->samples().begin(),
                                         node->curve->samples().end());
                    curve_parts.push_back(&storage.back());
                }
                if (node->variance) {
                    storage.emplace_back(node->variance->samples().begin(),
                                         node->variance->samples().end());
                    variance_parts.push_back(&storage.back());
                }
            } else if (mode == CurveMode::average && annotated_states[s].has_curves(id)) {
                storage.emplace_back(annotated_states[s].curve_of(id).samples().begin(),
                                     annotated_states[s].curve_of(id).samples().end());
                curve_parts.push_back(&storage.back());
                storage.emplace_back(annotated_states[s].variance_of(id).samples().begin(),
                                     annotated_states[s].variance_of(id).samples().end());
                variance_parts.push_back(&storage.back());
            }
        }

        merged.epsilon = epsilon_sum / n;
        merged.measurement_cost = present > 0 ? cost_sum / static_cast<double>(present) : 1.0;
        if (util_count > 0) {
            merged.current_utilization = util_sum / static_cast<double>(util_count);
        }

        if (!is_composite) {
            if (!curve_parts.empty()) {
                merged.curve = EfficiencyCurve(
                    scaled_sum(curve_parts, curve_parts.front()->size(), n));
            }
            if (!variance_parts.empty()) {
                merged.variance = VarianceCurve(
                    scaled_sum(variance_parts, variance_parts.front()->size(), n));
            }
        } else if (mode == CurveMode::average && !curve_parts.empty()) {
            averaged_curves.emplace(
                id, EfficiencyCurve(scaled_sum(curve_parts, curve_parts.front()->size(), n)));
            averaged_variances.emplace(
                id, VarianceCurve(scaled_sum(variance_parts, variance_parts.front()->size(), n)));
        }

        merged_nodes.push_back(std::move(merged));
    }

    std::vector<UtilizationEdge> merged_edges;
    merged_edges.reserve(edge_keys.size());
    for (const auto& [from, to] : edge_keys) {
        double sum = 0.0;
        for (const auto* state : ordered) {
            if (!state->contains(from) || !state->contains(to)) {
                continue;
            }
            for (const auto* edge : state->outgoing(from)) {
                if (edge->to == to) {
                    sum += edge->weight;
                }
            }
        }
        merged_edges.push_back({from, to, sum / n});
    }

    CovarianceTable merged_cov;
    std::set<std::pair<std::string, std::string>> cov_keys;
    for (const auto* state : ordered) {
        for (const auto& [key, value] : state->covariances().entries()) {
            cov_keys.insert(key);
        }
    }
    for (const auto& key : cov_keys) {
        double sum = 0.0;
        for (const auto* state : ordered) {
            sum += state->covariances().get(key.first, key.second);
        }
        merged_cov.set(key.first, key.second, sum / n);
    }

    MergedGraph result;
    result.state_ids.reserve(ordered.size());
    for (const auto* state : ordered) {
        result.state_ids.push_back(state->state_id());
    }
    result.curve_mode = mode;
    result.averaged_curves = std::move(averaged_curves);
    result.averaged_variances = std::move(averaged_variances);
    result.graph = StateGraph("merged:" + std::to_string(ordered.size()),
                              std::move(merged_nodes), std::move(merged_edges),
                              std::move(merged_cov));
    return result;
}

MergedGraph renormalize_weights(MergedGraph merged) {
    std::map<std::string, double> sums;
    for (const auto& edge : merged.graph.edges()) {
        sums[edge.from] += edge.weight;
    }

    std::vector<UtilizationEdge> edges(merged.graph.edges().begin(), merged.graph.edges().end());
    merged.raw_weights.clear();
    merged.zero_weight_composites.clear();
    for (auto& edge : edges) {
        merged.raw_weights[{edge.from, edge.to}] = edge.weight;
        const double sum = sums[edge.from];
        if (sum > zero_weight_threshold) {
            edge.weight /= sum;
        }
    }
    for (const auto& [id, sum] : sums) {
        if (sum <= zero_weight_threshold) {
            merged.zero_weight_composites.push_back(id);
        }
    }

    merged.graph = StateGraph(merged.graph.state_id(),
                              {merged.graph.nodes().begin(), merged.graph.nodes().end()},
                              std::move(edges), merged.graph.covariances());
    merged.renormalized = true;
    return merged;
}

AnnotatedGraph annotate(const MergedGraph& merged) {
    if (merged.curve_mode == CurveMode::average) {
        std::vector<std::string> underivable;
        for (const auto& node : merged.graph.nodes()) {
            if (node.kind == ComponentKind::composite &&
                !merged.averaged_curves.contains(node.id)) {
                underivable.push_back(node.id);
            }
        }
        return AnnotatedGraph(merged.graph, merged.averaged_curves,
                              merged.averaged_variances, std::move(underivable));
    }
    if (!merged.renormalized) {
        throw DomainError("rederive mode requires renormalized weights; call renormalize_weights first");
    }
    return derive_composites(merged.graph);
}

} // namespace eccbench
