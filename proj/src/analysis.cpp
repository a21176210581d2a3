#include "eccbench/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace eccbench {

const GapRecord* GapReport::find(std::string_view id) const {
    for (const auto& record : records) {
        if (record.id == id) {
            return &record;
        }
    }
    return nullptr;
}

GapRecord efficiency_gap(const AnnotatedGraph& annotated, std::string_view id) {
    const auto* node = annotated.graph().find(id);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    if (!node->current_utilization) {
        throw MissingUtilizationError("component " + std::string(id) +
                                      " has no current utilization");
    }

    const auto& curve = annotated.curve_of(id);
    const auto& variance = annotated.variance_of(id);

    GapRecord record;
    record.id = std::string(id);
    record.u_opt = curve.argmax_utilization().value();
    record.u_current = *node->current_utilization;
    record.eta_opt = curve.evaluate(record.u_opt);
    record.eta_current = curve.evaluate(record.u_current);
    record.sigma2_opt = variance.evaluate(record.u_opt);
    record.sigma2_current = variance.evaluate(record.u_current);
    record.gap = std::min(1.0, std::abs(record.eta_opt - record.eta_current) +
                                   std::sqrt(record.sigma2_opt + record.sigma2_current));
    return record;
}

GapReport gap_report(const AnnotatedGraph& annotated, std::vector<std::string>* skipped) {
    GapReport report;
    for (const auto& node : annotated.graph().nodes()) {
        if (!annotated.has_curves(node.id) || !node.current_utilization) {
            if (skipped) {
                skipped->push_back(node.id);
            }
            continue;
        }
        report.records.push_back(efficiency_gap(annotated, node.id));
    }
    return report;
}

void BenchmarkThresholds::check() const {
    if (!(a >= 0.0 && a <= b && b <= 1.0)) {
        throw DomainError("thresholds must satisfy 0 <= a <= b <= 1");
    }
}

const char* to_string(BenchmarkCategory category) {
    switch (category) {
    case BenchmarkCategory::well_tuned: return "well_tuned";
    case BenchmarkCategory::partially_optimized: return "partially_optimized";
    case BenchmarkCategory::misconfigured: return "misconfigured";
    }
    return "unknown";
}

BenchmarkCategory categorize(double gap, const BenchmarkThresholds& thresholds) {
    thresholds.check();
    if (gap < thresholds.a) {
        return BenchmarkCategory::well_tuned;
    }
    if (gap <= thresholds.b) {
        return BenchmarkCategory::partially_optimized;
    }
    return BenchmarkCategory::misconfigured;
}

std::map<std::string, BenchmarkCategory> benchmark(const GapReport& report,
                                                   const BenchmarkThresholds& thresholds) {
    thresholds.check();
    std::map<std::string, BenchmarkCategory> categories;
    for (const auto& record : report.records) {
        categories[record.id] = categorize(record.gap, thresholds);
    }
    return categories;
}

std::vector<std::string> rank_targets(const GapReport& report) {
    std::vector<const GapRecord*> records;
    records.reserve(report.records.size());
    for (const auto& record : report.records) {
        records.push_back(&record);
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const GapRecord* a, const GapRecord* b) {
                         if (a->gap != b->gap) {
                             return a->gap > b->gap;
                         }
                         return a->id < b->id;
                     });
    std::vector<std::string> ranking;
    ranking.reserve(records.size());
    for (const auto* record : records) {
        ranking.push_back(record->id);
    }
    return ranking;
}

} // namespace eccbench
