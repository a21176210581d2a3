// Shared graph-building helpers for the unit tests.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eccbench/graph.hpp"

namespace fixtures {

inline eccbench::ComponentNode leaf(std::string id, double efficiency = 0.5,
                                    double variance = 0.01, double utilization = -1.0,
                                    std::size_t resolution = 100) {
    eccbench::ComponentNode node;
    node.id = std::move(id);
    node.kind = eccbench::ComponentKind::measurable;
    node.curve = eccbench::EfficiencyCurve::constant(efficiency, resolution);
    node.variance = eccbench::VarianceCurve::constant(variance, resolution);
    if (utilization >= 0.0) {
        node.current_utilization = utilization;
    }
    return node;
}

inline eccbench::ComponentNode leaf_with(std::string id, eccbench::EfficiencyCurve curve,
                                         eccbench::VarianceCurve variance,
                                         double utilization = -1.0) {
    eccbench::ComponentNode node;
    node.id = std::move(id);
    node.kind = eccbench::ComponentKind::measurable;
    node.curve = std::move(curve);
    node.variance = std::move(variance);
    if (utilization >= 0.0) {
        node.current_utilization = utilization;
    }
    return node;
}

inline eccbench::ComponentNode composite(std::string id, double epsilon = 0.0,
                                         double utilization = -1.0) {
    eccbench::ComponentNode node;
    node.id = std::move(id);
    node.kind = eccbench::ComponentKind::composite;
    node.epsilon = epsilon;
    if (utilization >= 0.0) {
        node.current_utilization = utilization;
    }
    return node;
}

inline eccbench::UtilizationEdge edge(std::string from, std::string to, double weight) {
    return {std::move(from), std::move(to), weight};
}

} // namespace fixtures
