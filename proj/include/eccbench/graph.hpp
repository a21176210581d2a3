#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eccbench/curve.hpp"

namespace eccbench {

enum class ComponentKind { measurable, composite };

const char* to_string(ComponentKind kind);

struct ComponentNode {
    std::string id;
    ComponentKind kind = ComponentKind::measurable;
    std::optional<EfficiencyCurve> curve;      // required on measurable nodes
    std::optional<VarianceCurve> variance;     // required on measurable nodes
    double epsilon = 0.0;                      // composite aggregation offset
    double measurement_cost = 1.0;
    std::optional<double> current_utilization; // in [0,1] when set
};

/// Directed utilization edge: `from` (the utilizer) aggregates `to`.
struct UtilizationEdge {
    std::string from;
    std::string to;
    double weight = 0.0; // in [0,1]
};

/// Scalar covariance per unordered component pair; absent pairs read as 0.
class CovarianceTable {
public:
    void set(std::string a, std::string b, double value);
    double get(std::string_view a, std::string_view b) const;

    const std::map<std::pair<std::string, std::string>, double>& entries() const {
        return entries_;
    }

private:
    std::map<std::pair<std::string, std::string>, double> entries_;
};

/// One observed system state: components, utilization edges, covariances.
/// Immutable after construction; nodes and edges are kept sorted by id so
/// every downstream traversal is deterministic.
class StateGraph {
public:
    StateGraph() = default;
    StateGraph(std::string state_id,
               std::vector<ComponentNode> nodes,
               std::vector<UtilizationEdge> edges,
               CovarianceTable covariances = {});

    const std::string& state_id() const { return state_id_; }
    std::span<const ComponentNode> nodes() const { return nodes_; }
    std::span<const UtilizationEdge> edges() const { return edges_; }
    const CovarianceTable& covariances() const { return covariances_; }

    bool contains(std::string_view id) const { return find(id) != nullptr; }
    const ComponentNode* find(std::string_view id) const;

    /// Outgoing edges of `id`, sorted by target id.
    std::vector<const UtilizationEdge*> outgoing(std::string_view id) const;
    /// Incoming edges of `id` (edges whose `to` is `id`).
    std::vector<const UtilizationEdge*> incoming(std::string_view id) const;

private:
    std::string state_id_;
    std::vector<ComponentNode> nodes_;
    std::vector<UtilizationEdge> edges_;
    CovarianceTable covariances_;
};

enum class ViolationKind {
    cycle,
    weight_sum,
    kind_mismatch,
    missing_curve,
    missing_variance,
    dangling_edge,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
    std::vector<std::string> ids; // offending component ids
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

/// Structural checks: acyclicity, outgoing-weight sums, kind/topology
/// agreement, curve presence on measurable nodes, dangling edge endpoints.
/// Violations are data, not exceptions.
ValidationReport validate(const StateGraph& graph);

struct Classification {
    std::vector<std::string> measurable; // no outgoing edges
    std::vector<std::string> composite;  // at least one outgoing edge
};

/// Partition the node set by topology. Throws InvalidGraphError when the
/// graph does not validate.
Classification classify(const StateGraph& graph);

/// Children-before-parents order: for every edge (from, to), `to` appears
/// before `from`. Deterministic (ties resolved by id). Throws CycleError.
std::vector<std::string> topological_order(const StateGraph& graph);

/// Copy of `graph` with one node's utilization replaced.
StateGraph with_utilization(const StateGraph& graph, std::string_view id, double utilization);

/// Copy of `graph` with one node's variance curve scaled by `factor`.
StateGraph with_scaled_variance(const StateGraph& graph, std::string_view id, double factor);

} // namespace eccbench
