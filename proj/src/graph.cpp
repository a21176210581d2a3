#include "eccbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace eccbench {

const char* to_string(ComponentKind kind) {
    return kind == ComponentKind::measurable ? "measurable" : "composite";
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::cycle: return "cycle";
    case ViolationKind::weight_sum: return "weight_sum";
    case ViolationKind::kind_mismatch: return "kind_mismatch";
    case ViolationKind::missing_curve: return "missing_curve";
    case ViolationKind::missing_variance: return "missing_variance";
    case ViolationKind::dangling_edge: return "dangling_edge";
    }
    return "unknown";
}

void CovarianceTable::set(std::string a, std::string b, double value) {
    if (a == b) {
        throw DomainError("covariance pair must name two distinct components: " + a);
    }
    if (b < a) {
        std::swap(a, b);
    }
    entries_[{std::move(a), std::move(b)}] = value;
}

double CovarianceTable::get(std::string_view a, std::string_view b) const {
    std::string lo(a < b ? a : b);
    std::string hi(a < b ? b : a);
    auto it = entries_.find({lo, hi});
    return it == entries_.end() ? 0.0 : it->second;
}

StateGraph::StateGraph(std::string state_id,
                       std::vector<ComponentNode> nodes,
                       std::vector<UtilizationEdge> edges,
                       CovarianceTable covariances)
    : state_id_(std::move(state_id)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      covariances_(std::move(covariances)) {
    std::sort(nodes_.begin(), nodes_.end(),
              [](const ComponentNode& a, const ComponentNode& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end(),
              [](const UtilizationEdge& a, const UtilizationEdge& b) {
                  return std::tie(a.from, a.to) < std::tie(b.from, b.to);
              });
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (nodes_[i].id == nodes_[i + 1].id) {
            throw DomainError("duplicate component id: " + nodes_[i].id);
        }
    }
    for (const auto& node : nodes_) {
        if (node.id.empty()) {
            throw DomainError("component id must be non-empty");
        }
    }
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
        if (edges_[i].from == edges_[i + 1].from && edges_[i].to == edges_[i + 1].to) {
            throw DomainError("duplicate edge: " + edges_[i].from + " -> " + edges_[i].to);
        }
    }
}

const ComponentNode* StateGraph::find(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const ComponentNode& n, std::string_view v) { return n.id < v; });
    if (it != nodes_.end() && it->id == id) {
        return &*it;
    }
    return nullptr;
}

std::vector<const UtilizationEdge*> StateGraph::outgoing(std::string_view id) const {
    std::vector<const UtilizationEdge*> out;
    for (const auto& edge : edges_) {
        if (edge.from == id) {
            out.push_back(&edge);
        }
    }
    return out;
}

std::vector<const UtilizationEdge*> StateGraph::incoming(std::string_view id) const {
    std::vector<const UtilizationEdge*> in;
    for (const auto& edge : edges_) {
        if (edge.to == id) {
            in.push_back(&edge);
        }
    }
    return in;
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) {
        return "valid";
    }
    std::ostringstream out;
    for (const auto& v : violations) {
        out << eccbench::to_string(v.kind) << ": " << v.message << '\n';
    }
    return out.str();
}

namespace {

// Walks the graph from `start`, returning the node sequence of one cycle if
// any directed cycle is reachable.
bool find_cycle(const StateGraph& graph, const std::string& start,
                std::map<std::string, int>& color, std::vector<std::string>& stack,
                std::vector<std::string>& cycle) {
    color[start] = 1;
    stack.push_back(start);
    for (const auto* edge : graph.outgoing(start)) {
        if (!graph.contains(edge->to)) {
            continue; // dangling edges are reported separately
        }
        const int c = color[edge->to];
        if (c == 1) {
            auto it = std::find(stack.begin(), stack.end(), edge->to);
            cycle.assign(it, stack.end());
            return true;
        }
        if (c == 0 && find_cycle(graph, edge->to, color, stack, cycle)) {
            return true;
        }
    }
    stack.pop_back();
    color[start] = 2;
    return false;
}

} // namespace

ValidationReport validate(const StateGraph& graph) {
    ValidationReport report;

    for (const auto& edge : graph.edges()) {
        std::vector<std::string> missing;
        if (!graph.contains(edge.from)) {
            missing.push_back(edge.from);
        }
        if (!graph.contains(edge.to)) {
            missing.push_back(edge.to);
        }
        if (!missing.empty()) {
            report.violations.push_back(
                {ViolationKind::dangling_edge,
                 "edge " + edge.from + " -> " + edge.to + " references unknown components",
                 std::move(missing)});
        }
        if (edge.from == edge.to) {
            report.violations.push_back({ViolationKind::cycle,
                                         "self edge on " + edge.from,
                                         {edge.from}});
        }
    }

    {
        std::map<std::string, int> color;
        std::vector<std::string> stack;
        std::vector<std::string> cycle;
        for (const auto& node : graph.nodes()) {
            if (color[node.id] == 0 && find_cycle(graph, node.id, color, stack, cycle)) {
                std::ostringstream msg;
                msg << "cycle:";
                for (const auto& id : cycle) {
                    msg << ' ' << id;
                }
                report.violations.push_back({ViolationKind::cycle, msg.str(), cycle});
                break;
            }
        }
    }

    for (const auto& node : graph.nodes()) {
        const auto out = graph.outgoing(node.id);
        if (!out.empty()) {
            double sum = 0.0;
            for (const auto* edge : out) {
                sum += edge->weight;
            }
            if (std::abs(sum - 1.0) > weight_sum_tolerance) {
                std::ostringstream msg;
                msg << "outgoing weights of " << node.id << " sum to " << sum;
                report.violations.push_back({ViolationKind::weight_sum, msg.str(), {node.id}});
            }
        }
        const bool leaf = out.empty();
        if (leaf && node.kind != ComponentKind::measurable) {
            report.violations.push_back({ViolationKind::kind_mismatch,
                                         node.id + " has no outgoing edges but is marked composite",
                                         {node.id}});
        }
        if (!leaf && node.kind != ComponentKind::composite) {
            report.violations.push_back({ViolationKind::kind_mismatch,
                                         node.id + " has outgoing edges but is marked measurable",
                                         {node.id}});
        }
        if (node.kind == ComponentKind::measurable) {
            if (!node.curve) {
                report.violations.push_back({ViolationKind::missing_curve,
                                             "measurable node " + node.id + " has no efficiency curve",
                                             {node.id}});
            }
            if (!node.variance) {
                report.violations.push_back({ViolationKind::missing_variance,
                                             "measurable node " + node.id + " has no variance curve",
                                             {node.id}});
            }
        }
    }

    return report;
}

Classification classify(const StateGraph& graph) {
    const auto report = validate(graph);
    if (!report.valid()) {
        throw InvalidGraphError("classify on invalid graph:\n" + report.to_string());
    }
    Classification result;
    for (const auto& node : graph.nodes()) {
        if (graph.outgoing(node.id).empty()) {
            result.measurable.push_back(node.id);
        } else {
            result.composite.push_back(node.id);
        }
    }
    return result;
}

std::vector<std::string> topological_order(const StateGraph& graph) {
    // Kahn on child counts: a node becomes ready once all components it
    // utilizes are emitted. std::set gives the deterministic id tie-break.
    std::map<std::string, std::size_t> pending;
    for (const auto& node : graph.nodes()) {
        std::size_t count = 0;
        for (const auto* edge : graph.outgoing(node.id)) {
            if (graph.contains(edge->to)) {
                ++count;
            }
        }
        pending[node.id] = count;
    }

    std::set<std::string> ready;
    for (const auto& [id, count] : pending) {
        if (count == 0) {
            ready.insert(id);
        }
    }

    std::vector<std::string> order;
    order.reserve(pending.size());
    while (!ready.empty()) {
        const std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto* edge : graph.incoming(id)) {
            auto it = pending.find(edge->from);
            if (it != pending.end() && --it->second == 0) {
                ready.insert(it->first);
            }
        }
    }

    if (order.size() != pending.size()) {
        std::ostringstream msg;
        msg << "graph has a cycle; unordered components:";
        for (const auto& [id, count] : pending) {
            if (count > 0) {
                msg << ' ' << id;
            }
        }
        throw CycleError(msg.str());
    }
    return order;
}

StateGraph with_utilization(const StateGraph& graph, std::string_view id, double utilization) {
    std::vector<ComponentNode> nodes(graph.nodes().begin(), graph.nodes().end());
    bool found = false;
    for (auto& node : nodes) {
        if (node.id == id) {
            node.current_utilization = Utilization(utilization).value();
            found = true;
        }
    }
    if (!found) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    return StateGraph(graph.state_id(), std::move(nodes),
                      {graph.edges().begin(), graph.edges().end()}, graph.covariances());
}

StateGraph with_scaled_variance(const StateGraph& graph, std::string_view id, double factor) {
    if (!(factor >= 0.0)) {
        throw DomainError("variance scale factor must be non-negative");
    }
    std::vector<ComponentNode> nodes(graph.nodes().begin(), graph.nodes().end());
    bool found = false;
    for (auto& node : nodes) {
        if (node.id == id) {
            if (!node.variance) {
                throw DomainError("component " + std::string(id) + " has no variance curve");
            }
            std::vector<double> scaled(node.variance->samples().begin(),
                                       node.variance->samples().end());
            for (double& v : scaled) {
                v *= factor;
            }
            node.variance = VarianceCurve(std::move(scaled));
            found = true;
        }
    }
    if (!found) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    return StateGraph(graph.state_id(), std::move(nodes),
                      {graph.edges().begin(), graph.edges().end()}, graph.covariances());
}

} // namespace eccbench
