#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eccbench/aggregate.hpp"

namespace eccbench {

struct GapRecord {
    std::string id;
    double u_opt = 0.0;
    double u_current = 0.0;
    double eta_opt = 0.0;
    double eta_current = 0.0;
    double sigma2_opt = 0.0;
    double sigma2_current = 0.0;
    double gap = 0.0; // in [0,1]
};

struct GapReport {
    std::vector<GapRecord> records; // sorted by id

    const GapRecord* find(std::string_view id) const;
};

/// Efficiency distance to the curve's optimum, inflated by the standard
/// deviation at both utilizations and capped at 1:
///   min(1, |eta(u_opt) - eta(u_current)| + sqrt(s2_opt + s2_current))
GapRecord efficiency_gap(const AnnotatedGraph& annotated, std::string_view id);

/// Gap records for every component with curves and a known utilization.
/// Components skipped (no utilization, underivable) land in `skipped`.
GapReport gap_report(const AnnotatedGraph& annotated,
                     std::vector<std::string>* skipped = nullptr);

struct BenchmarkThresholds {
    double a = 0.1;
    double b = 0.3;

    /// Requires 0 <= a <= b <= 1.
    void check() const;
};

enum class BenchmarkCategory { well_tuned, partially_optimized, misconfigured };

const char* to_string(BenchmarkCategory category);

/// gap < a: well tuned; a <= gap <= b: partially optimized; gap > b:
/// misconfigured.
BenchmarkCategory categorize(double gap, const BenchmarkThresholds& thresholds);

std::map<std::string, BenchmarkCategory> benchmark(const GapReport& report,
                                                   const BenchmarkThresholds& thresholds);

/// Component ids by descending gap; ties resolved by id.
std::vector<std::string> rank_targets(const GapReport& report);

} // namespace eccbench
