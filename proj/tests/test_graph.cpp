#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "eccbench/graph.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace eccbench;
using fixtures::composite;
using fixtures::edge;
using fixtures::leaf;

namespace {

bool has_violation(const ValidationReport& report, ViolationKind kind) {
    return std::any_of(report.violations.begin(), report.violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
}

} // namespace

TEST_CASE("empty graph is valid") {
    const StateGraph graph("empty", {}, {});
    CHECK(validate(graph).valid());
}

TEST_CASE("two-node cycle is reported with both ids") {
    const StateGraph graph("cyclic", {composite("A"), composite("B")},
                           {edge("A", "B", 1.0), edge("B", "A", 1.0)});
    const auto report = validate(graph);
    REQUIRE(has_violation(report, ViolationKind::cycle));
    for (const auto& violation : report.violations) {
        if (violation.kind == ViolationKind::cycle) {
            CHECK(std::count(violation.ids.begin(), violation.ids.end(), "A") == 1);
            CHECK(std::count(violation.ids.begin(), violation.ids.end(), "B") == 1);
        }
    }
}

TEST_CASE("weight sums off 1 are reported with the actual sum") {
    const StateGraph graph("w", {composite("p"), leaf("a"), leaf("b")},
                           {edge("p", "a", 0.5), edge("p", "b", 0.4)});
    const auto report = validate(graph);
    REQUIRE(has_violation(report, ViolationKind::weight_sum));
    bool found = false;
    for (const auto& violation : report.violations) {
        if (violation.kind == ViolationKind::weight_sum) {
            CHECK(violation.message.find("0.9") != std::string::npos);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("kind/topology mismatches are reported") {
    SUBCASE("leaf marked composite") {
        const StateGraph graph("k1", {composite("alone")}, {});
        CHECK(has_violation(validate(graph), ViolationKind::kind_mismatch));
    }
    SUBCASE("internal node marked measurable") {
        const StateGraph graph("k2", {leaf("parent"), leaf("child")},
                               {edge("parent", "child", 1.0)});
        CHECK(has_violation(validate(graph), ViolationKind::kind_mismatch));
    }
}

TEST_CASE("measurable nodes need both curves") {
    ComponentNode bare;
    bare.id = "bare";
    bare.kind = ComponentKind::measurable;
    const StateGraph graph("m", {bare}, {});
    const auto report = validate(graph);
    CHECK(has_violation(report, ViolationKind::missing_curve));
    CHECK(has_violation(report, ViolationKind::missing_variance));
}

TEST_CASE("dangling edges name the missing endpoint") {
    const StateGraph graph("d", {composite("p")}, {edge("p", "ghost", 1.0)});
    const auto report = validate(graph);
    REQUIRE(has_violation(report, ViolationKind::dangling_edge));
    for (const auto& violation : report.violations) {
        if (violation.kind == ViolationKind::dangling_edge) {
            CHECK(violation.ids == std::vector<std::string>{"ghost"});
        }
    }
}

TEST_CASE("self edges are cycle violations") {
    const StateGraph graph("s", {composite("p"), leaf("a")},
                           {edge("p", "p", 0.5), edge("p", "a", 0.5)});
    CHECK(has_violation(validate(graph), ViolationKind::cycle));
}

TEST_CASE("duplicate component ids are rejected at construction") {
    CHECK_THROWS_AS(StateGraph("dup", {leaf("x"), leaf("x")}, {}), DomainError);
    CHECK_THROWS_AS(StateGraph("dup-edge", {composite("p"), leaf("a"), leaf("b")},
                               {edge("p", "a", 0.5), edge("p", "a", 0.5)}),
                    DomainError);
}

TEST_CASE("classify: single node") {
    const StateGraph graph("one", {leaf("only")}, {});
    const auto result = classify(graph);
    CHECK(result.measurable == std::vector<std::string>{"only"});
    CHECK(result.composite.empty());
}

TEST_CASE("classify: vehicle over three devices") {
    const StateGraph graph("av3",
                           {composite("av"), leaf("lidar"), leaf("processor"), leaf("comm")},
                           {edge("av", "lidar", 0.3), edge("av", "processor", 0.4),
                            edge("av", "comm", 0.3)});
    const auto result = classify(graph);
    CHECK(result.measurable == std::vector<std::string>{"comm", "lidar", "processor"});
    CHECK(result.composite == std::vector<std::string>{"av"});
}

TEST_CASE("classify: chain") {
    const StateGraph graph("chain", {composite("cloud"), composite("edge"), leaf("sensor")},
                           {edge("cloud", "edge", 1.0), edge("edge", "sensor", 1.0)});
    const auto result = classify(graph);
    CHECK(result.measurable == std::vector<std::string>{"sensor"});
    CHECK(result.composite == std::vector<std::string>{"cloud", "edge"});
}

TEST_CASE("classify throws on an invalid graph") {
    const StateGraph graph("bad", {composite("A"), composite("B")},
                           {edge("A", "B", 1.0), edge("B", "A", 1.0)});
    CHECK_THROWS_AS(classify(graph), InvalidGraphError);
}

TEST_CASE("classify is a partition") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ComponentNode> nodes;
        std::vector<UtilizationEdge> edges;
        const int n = 8;
        std::vector<std::vector<int>> children(n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.uniform01() < 0.3) {
                    children[i].push_back(j);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            const std::string id = "n" + std::to_string(i);
            if (children[i].empty()) {
                nodes.push_back(leaf(id));
            } else {
                nodes.push_back(composite(id));
                const double w = 1.0 / static_cast<double>(children[i].size());
                for (std::size_t k = 0; k < children[i].size(); ++k) {
                    // exact sum: the last child takes the remainder
                    const double weight = k + 1 == children[i].size()
                        ? 1.0 - w * static_cast<double>(children[i].size() - 1)
                        : w;
                    edges.push_back(edge(id, "n" + std::to_string(children[i][k]), weight));
                }
            }
        }
        const StateGraph graph("rand", std::move(nodes), std::move(edges));
        const auto result = classify(graph);
        std::set<std::string> all;
        all.insert(result.measurable.begin(), result.measurable.end());
        all.insert(result.composite.begin(), result.composite.end());
        CHECK(all.size() == result.measurable.size() + result.composite.size());
        CHECK(all.size() == graph.nodes().size());
    }
}

TEST_CASE("topological order: chain lists children first") {
    const StateGraph graph("chain", {composite("A"), composite("B"), leaf("C")},
                           {edge("A", "B", 1.0), edge("B", "C", 1.0)});
    CHECK(topological_order(graph) == std::vector<std::string>{"C", "B", "A"});
}

TEST_CASE("topological order: diamond respects the partial order") {
    const StateGraph graph("diamond",
                           {composite("A"), composite("B"), composite("C"), leaf("D")},
                           {edge("A", "B", 0.5), edge("A", "C", 0.5), edge("B", "D", 1.0),
                            edge("C", "D", 1.0)});
    const auto order = topological_order(graph);
    const auto pos = [&](const std::string& id) {
        return std::find(order.begin(), order.end(), id) - order.begin();
    };
    CHECK(pos("D") < pos("B"));
    CHECK(pos("D") < pos("C"));
    CHECK(pos("B") < pos("A"));
    CHECK(pos("C") < pos("A"));
}

TEST_CASE("topological order: random DAGs verified edge by edge") {
    oracle::Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ComponentNode> nodes;
        std::vector<UtilizationEdge> edges;
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            std::vector<int> targets;
            for (int j = i + 1; j < n; ++j) {
                if (rng.uniform01() < 0.15) {
                    targets.push_back(j);
                }
            }
            const std::string id = "n" + std::to_string(10 + i); // two digits keep ids sortable
            if (targets.empty()) {
                nodes.push_back(leaf(id));
            } else {
                nodes.push_back(composite(id));
                for (std::size_t k = 0; k < targets.size(); ++k) {
                    const double w = 1.0 / static_cast<double>(targets.size());
                    edges.push_back(edge(id, "n" + std::to_string(10 + targets[k]),
                                         k + 1 == targets.size()
                                             ? 1.0 - w * static_cast<double>(targets.size() - 1)
                                             : w));
                }
            }
        }
        const StateGraph graph("rand", std::move(nodes), std::move(edges));
        const auto order = topological_order(graph);
        REQUIRE(order.size() == graph.nodes().size());
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < order.size(); ++i) {
            pos[order[i]] = i;
        }
        for (const auto& e : graph.edges()) {
            CHECK(pos.at(e.to) < pos.at(e.from));
        }
    }
}

TEST_CASE("topological order raises CycleError on cycles") {
    const StateGraph graph("cyc", {composite("A"), composite("B")},
                           {edge("A", "B", 1.0), edge("B", "A", 1.0)});
    CHECK_THROWS_AS(topological_order(graph), CycleError);
}

TEST_CASE("validate-clean implies a working topological order") {
    const StateGraph graph("ok", {composite("root"), leaf("a"), leaf("b")},
                           {edge("root", "a", 0.6), edge("root", "b", 0.4)});
    REQUIRE(validate(graph).valid());
    CHECK_NOTHROW(topological_order(graph));
}

TEST_CASE("covariance table is symmetric with zero default") {
    CovarianceTable table;
    table.set("b", "a", 0.25);
    CHECK(table.get("a", "b") == 0.25);
    CHECK(table.get("b", "a") == 0.25);
    CHECK(table.get("a", "c") == 0.0);
    CHECK_THROWS_AS(table.set("a", "a", 0.1), DomainError);
}

TEST_CASE("utilization and variance edits return modified copies") {
    const StateGraph graph("g", {leaf("x", 0.5, 0.04)}, {});
    const auto with_u = with_utilization(graph, "x", 0.3);
    CHECK(with_u.find("x")->current_utilization == 0.3);
    CHECK(!graph.find("x")->current_utilization.has_value());

    const auto scaled = with_scaled_variance(graph, "x", 0.25);
    CHECK(scaled.find("x")->variance->samples()[0] == doctest::Approx(0.01));
    CHECK(graph.find("x")->variance->samples()[0] == doctest::Approx(0.04));

    CHECK_THROWS_AS(with_utilization(graph, "ghost", 0.5), UnknownNodeError);
    CHECK_THROWS_AS(with_scaled_variance(graph, "x", -1.0), DomainError);
}
