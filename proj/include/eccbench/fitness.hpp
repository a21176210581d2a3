#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eccbench/aggregate.hpp"

namespace eccbench {

/// Where a node's variance is read when checking it against the band.
enum class VariancePoint { current, optimal, integrated };

VariancePoint variance_point_from_string(std::string_view name);
const char* to_string(VariancePoint point);

struct FitnessTarget {
    std::string node;
    double variance_min = 0.0;
    double variance_max = 1.0;
    VariancePoint point = VariancePoint::current;
};

enum class FitnessAction { no_change, prune, refine };

const char* to_string(FitnessAction action);

struct FitnessCandidate {
    std::string id;
    double score = 0.0;
    double variance_contribution = 0.0; // flattened weight^2 * sigma^2
    double measurement_cost = 0.0;
};

struct FitnessRecommendation {
    FitnessAction action = FitnessAction::no_change;
    int rule = 1; // 1: keep, 2: prune, 3: refine
    double target_variance = 0.0;
    std::vector<FitnessCandidate> candidates; // descending score
    std::string rationale;
};

/// Three-rule protocol on the target's variance band. Within the band:
/// no change. Below it: prune candidates ranked by measurement cost per unit
/// variance contribution. Above it: refine candidates ranked by variance
/// contribution per unit measurement cost. Candidates are restricted to the
/// target's descendant subgraph.
FitnessRecommendation assess(const AnnotatedGraph& annotated, const FitnessTarget& target);

struct PruneResult {
    StateGraph graph;
    /// Parents whose epsilon should be recalibrated after the prune.
    std::vector<std::string> recalibrate_epsilon;
};

/// Remove a measurable node and its incoming edges, renormalizing the
/// remaining sibling weights. Refuses to orphan a composite.
PruneResult apply_prune(const StateGraph& graph, std::string_view node);

} // namespace eccbench
