#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eccbench/aggregate.hpp"
#include "eccbench/graph.hpp"

namespace eccbench {

/// How composite curves of a merged graph are produced: re-derived from the
/// merged leaves and renormalized weights, or averaged from the per-state
/// derived curves.
enum class CurveMode { rederive, average };

CurveMode curve_mode_from_string(std::string_view name);
const char* to_string(CurveMode mode);

/// Aggregate over an observed state set: union node and edge sets, weights
/// and curves averaged over the full state count (absence contributes zero).
struct MergedGraph {
    StateGraph graph;
    std::vector<std::string> state_ids; // sorted contributing labels
    CurveMode curve_mode = CurveMode::rederive;

    /// Pre-normalization weights, retained by renormalize_weights.
    std::map<std::pair<std::string, std::string>, double> raw_weights;
    /// Composites whose aggregated outgoing weight was ~0 (absent in every
    /// state); excluded from derivation and gap analysis.
    std::vector<std::string> zero_weight_composites;
    bool renormalized = false;

    /// Only populated in CurveMode::average.
    std::map<std::string, EfficiencyCurve> averaged_curves;
    std::map<std::string, VarianceCurve> averaged_variances;
};

MergedGraph merge(std::span<const StateGraph> states, CurveMode mode = CurveMode::rederive);

/// Rescale each node's outgoing weights to sum to 1, keeping the raw
/// averaged weights for reporting. Zero-sum nodes are flagged, not fixed.
MergedGraph renormalize_weights(MergedGraph merged);

/// Composite curves for the merged graph, honoring its curve mode.
/// Requires a renormalized merge in rederive mode.
AnnotatedGraph annotate(const MergedGraph& merged);

} // namespace eccbench
