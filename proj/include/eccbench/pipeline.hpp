#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eccbench/analysis.hpp"
#include "eccbench/fitness.hpp"
#include "eccbench/io.hpp"
#include "eccbench/merge.hpp"
#include "eccbench/scenario.hpp"

namespace eccbench {

struct AnalyzeOptions {
    WindowSpec window;
    BenchmarkThresholds thresholds;
    CurveMode curve_mode = CurveMode::rederive;
};

struct AnalyzeResult {
    MergedGraph merged;
    AnnotatedGraph annotated;
    GapReport report;
    std::map<std::string, BenchmarkCategory> categories;
    std::vector<std::string> ranking;
    std::vector<std::string> skipped;
    std::size_t state_count = 0;
};

/// windows -> per-state graphs -> merge -> renormalize -> derive -> gap ->
/// benchmark -> rank. Errors carry the failing stage in their message.
AnalyzeResult run_analysis(const StateGraph& template_graph,
                           std::span<const TraceRecord> records,
                           const AnalyzeOptions& options);

std::string gap_report_json(const AnalyzeResult& result, const AnalyzeOptions& options);
std::string gap_report_csv(const AnalyzeResult& result);
std::string curve_csv(const AnnotatedGraph& annotated, std::string_view id);
std::string gap_record_json(const GapRecord& record);
std::string recommendation_json(const FitnessRecommendation& recommendation);
std::string validation_report_json(const ValidationReport& report);

/// Writes gaps.json, gaps.csv and curves/<id>.csv under out_dir; returns the
/// gaps.json content.
std::string write_analysis_artifacts(const AnalyzeResult& result, const AnalyzeOptions& options,
                                     const std::filesystem::path& out_dir);

/// Writes graph.json, traces_iter<k>.csv per iteration and summary.json
/// under out_dir; returns the summary.json content.
std::string run_simulation(const ScenarioConfig& config, const std::filesystem::path& out_dir);

} // namespace eccbench
