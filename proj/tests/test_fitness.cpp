#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eccbench/fitness.hpp"
#include "fixtures.hpp"

using namespace eccbench;
using fixtures::composite;
using fixtures::edge;
using fixtures::leaf;

namespace {

// root aggregates three measured devices at utilization 0.5
StateGraph tree(double var_a = 0.01, double var_b = 0.008, double var_c = 0.002) {
    return StateGraph("t",
                      {composite("root", 0.0, 0.5), leaf("a", 0.8, var_a, 0.5),
                       leaf("b", 0.8, var_b, 0.5), leaf("c", 0.8, var_c, 0.5)},
                      {edge("root", "a", 0.4), edge("root", "b", 0.35),
                       edge("root", "c", 0.25)});
}

} // namespace

TEST_CASE("rule 1: variance inside the band keeps the model") {
    const auto annotated = derive_composites(tree());
    const auto rec = assess(annotated, {"root", 0.0, 1.0, VariancePoint::current});
    CHECK(rec.action == FitnessAction::no_change);
    CHECK(rec.rule == 1);
    CHECK(rec.candidates.empty());
}

TEST_CASE("rule 2: high-cost low-variance measurements lead the prune list") {
    ComponentNode a = leaf("a", 0.8, 1e-6, 0.5);
    a.measurement_cost = 10.0;
    ComponentNode b = leaf("b", 0.8, 1e-6, 0.5);
    b.measurement_cost = 1.0;
    const StateGraph graph("p", {composite("root", 0.0, 0.5), a, b},
                           {edge("root", "a", 0.5), edge("root", "b", 0.5)});
    const auto annotated = derive_composites(graph);
    const auto rec = assess(annotated, {"root", 0.01, 1.0, VariancePoint::current});
    CHECK(rec.action == FitnessAction::prune);
    CHECK(rec.rule == 2);
    REQUIRE(rec.candidates.size() == 2);
    CHECK(rec.candidates[0].id == "a");
    CHECK(rec.candidates[1].id == "b");
    CHECK(rec.candidates[0].score > rec.candidates[1].score);
}

TEST_CASE("rule 3: forced refine ranks variance per cost") {
    const auto annotated = derive_composites(tree());
    const auto rec = assess(annotated, {"root", 0.0, 0.0, VariancePoint::current});
    CHECK(rec.action == FitnessAction::refine);
    CHECK(rec.rule == 3);
    REQUIRE(!rec.candidates.empty());
    // contribution of a: 0.4^2*0.01 = 0.0016 dominates (equal costs)
    CHECK(rec.candidates[0].id == "a");
    for (std::size_t i = 1; i < rec.candidates.size(); ++i) {
        CHECK(rec.candidates[i - 1].score >= rec.candidates[i].score);
    }
}

TEST_CASE("exactly one rule fires") {
    const auto annotated = derive_composites(tree());
    for (double vmax : {0.0, 0.001, 0.0027, 0.01, 1.0}) {
        for (double vmin : {0.0, 0.0005, 0.0027}) {
            if (vmin > vmax) {
                continue;
            }
            const auto rec = assess(annotated, {"root", vmin, vmax, VariancePoint::current});
            CHECK((rec.rule == 1 || rec.rule == 2 || rec.rule == 3));
            CHECK((rec.action == FitnessAction::no_change) == (rec.rule == 1));
            if (rec.rule == 1) {
                CHECK(rec.candidates.empty());
            } else {
                CHECK(!rec.candidates.empty());
            }
        }
    }
}

TEST_CASE("candidates come only from the target's descendant subgraph") {
    // two disjoint subtrees under separate roots
    const StateGraph graph("two",
                           {composite("r1", 0.0, 0.5), composite("r2", 0.0, 0.5),
                            leaf("a", 0.8, 0.02, 0.5), leaf("b", 0.8, 0.05, 0.5)},
                           {edge("r1", "a", 1.0), edge("r2", "b", 1.0)});
    const auto annotated = derive_composites(graph);
    const auto rec = assess(annotated, {"r1", 0.0, 0.0, VariancePoint::current});
    REQUIRE(rec.candidates.size() == 1);
    CHECK(rec.candidates[0].id == "a");
}

TEST_CASE("raising a contribution never lowers that candidate's rank") {
    auto rank_of = [](const FitnessRecommendation& rec, const std::string& id) {
        for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
            if (rec.candidates[i].id == id) {
                return i;
            }
        }
        return rec.candidates.size();
    };
    std::size_t previous = 10;
    for (double var_a : {0.001, 0.004, 0.02, 0.08}) {
        const auto annotated = derive_composites(tree(var_a));
        const auto rec = assess(annotated, {"root", 0.0, 0.0, VariancePoint::current});
        const std::size_t rank = rank_of(rec, "a");
        CHECK(rank <= previous);
        previous = rank;
    }
}

TEST_CASE("refine loop drives the error margin below 5% within 5 iterations") {
    StateGraph graph = tree();
    const double eta = 0.8;
    int iterations = 0;
    double margin = 100.0;
    while (iterations < 5) {
        const auto annotated = derive_composites(graph);
        margin = 100.0 *
                 std::sqrt(annotated.variance_of("root").evaluate(0.5)) /
                 annotated.curve_of("root").evaluate(0.5);
        if (margin < 5.0) {
            break;
        }
        const double vmax = std::pow(0.05 * eta, 2.0);
        const auto rec = assess(annotated, {"root", 0.0, vmax, VariancePoint::current});
        REQUIRE(rec.action == FitnessAction::refine);
        REQUIRE(!rec.candidates.empty());
        // a refined measurement with 4x smaller variance replaces the top candidate
        graph = with_scaled_variance(graph, rec.candidates[0].id, 0.25);
        ++iterations;
    }
    CHECK(margin < 5.0);
    CHECK(iterations <= 5);
}

TEST_CASE("variance can be read at the optimum or integrated") {
    std::vector<double> var(11, 0.01);
    var[8] = 0.09; // at the efficiency peak
    std::vector<double> eta(11, 0.4);
    eta[8] = 0.9;
    const StateGraph graph(
        "v", {fixtures::leaf_with("n", EfficiencyCurve(eta), VarianceCurve(var), 0.2)}, {});
    const auto annotated = derive_composites(graph);

    const auto at_current = assess(annotated, {"n", 0.0, 0.05, VariancePoint::current});
    CHECK(at_current.rule == 1); // 0.01 inside [0, 0.05]

    const auto at_optimal = assess(annotated, {"n", 0.0, 0.05, VariancePoint::optimal});
    CHECK(at_optimal.rule == 3); // 0.09 above the band
    CHECK(at_optimal.target_variance == doctest::Approx(0.09));

    const auto integrated = assess(annotated, {"n", 0.0, 0.05, VariancePoint::integrated});
    CHECK(integrated.target_variance == doctest::Approx((0.01 * 10 + 0.09) / 11.0));
}

TEST_CASE("assess rejects unknown nodes and inverted bands") {
    const auto annotated = derive_composites(tree());
    CHECK_THROWS_AS(assess(annotated, {"ghost", 0.0, 1.0, VariancePoint::current}),
                    UnknownNodeError);
    CHECK_THROWS_AS(assess(annotated, {"root", 0.5, 0.1, VariancePoint::current}), DomainError);
}

TEST_CASE("pruning a third equal-weight child renormalizes the rest to halves") {
    const StateGraph graph("pr",
                           {composite("root"), leaf("a"), leaf("b"), leaf("c")},
                           {edge("root", "a", 1.0 / 3.0), edge("root", "b", 1.0 / 3.0),
                            edge("root", "c", 1.0 - 2.0 / 3.0)});
    const auto result = apply_prune(graph, "c");
    REQUIRE(result.graph.edges().size() == 2);
    for (const auto& e : result.graph.edges()) {
        CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(result.recalibrate_epsilon == std::vector<std::string>{"root"});
    CHECK(validate(result.graph).valid());
    CHECK(!result.graph.contains("c"));
}

TEST_CASE("pruning the sole child is refused") {
    const StateGraph graph("solo", {composite("root"), leaf("only")},
                           {edge("root", "only", 1.0)});
    CHECK_THROWS_AS(apply_prune(graph, "only"), LastChildError);
}

TEST_CASE("prune argument checks") {
    const auto graph = tree();
    CHECK_THROWS_AS(apply_prune(graph, "ghost"), UnknownNodeError);
    CHECK_THROWS_AS(apply_prune(graph, "root"), DomainError); // composite
}

TEST_CASE("prune drops covariance entries of the removed node") {
    CovarianceTable cov;
    cov.set("a", "b", 0.01);
    cov.set("b", "c", 0.02);
    const StateGraph graph("cv",
                           {composite("root"), leaf("a"), leaf("b"), leaf("c")},
                           {edge("root", "a", 0.3), edge("root", "b", 0.3),
                            edge("root", "c", 0.4)},
                           cov);
    const auto result = apply_prune(graph, "a");
    CHECK(result.graph.covariances().get("a", "b") == 0.0);
    CHECK(result.graph.covariances().get("b", "c") == 0.02);
}

TEST_CASE("pruned graphs still validate in a multi-parent DAG") {
    const StateGraph graph("mp",
                           {composite("p1", 0.0), composite("p2", 0.0), leaf("shared"),
                            leaf("x"), leaf("y")},
                           {edge("p1", "shared", 0.5), edge("p1", "x", 0.5),
                            edge("p2", "shared", 0.4), edge("p2", "y", 0.6)});
    REQUIRE(validate(graph).valid());
    const auto result = apply_prune(graph, "shared");
    CHECK(validate(result.graph).valid());
    CHECK(result.recalibrate_epsilon == std::vector<std::string>{"p1", "p2"});
    for (const auto& e : result.graph.edges()) {
        CHECK(e.weight == doctest::Approx(1.0).epsilon(1e-12));
    }
}
