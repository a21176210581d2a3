#include "eccbench/pipeline.hpp"

#include <cstdio>

#include <json.hpp>

namespace eccbench {

using nlohmann::json;

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what());
    }
}

std::string format_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", v);
    return buffer;
}

json record_to_json(const GapRecord& record) {
    json out;
    out["id"] = record.id;
    out["u_opt"] = record.u_opt;
    out["u_current"] = record.u_current;
    out["eta_opt"] = record.eta_opt;
    out["eta_current"] = record.eta_current;
    out["sigma2_opt"] = record.sigma2_opt;
    out["sigma2_current"] = record.sigma2_current;
    out["gap"] = record.gap;
    return out;
}

} // namespace

AnalyzeResult run_analysis(const StateGraph& template_graph,
                           std::span<const TraceRecord> records,
                           const AnalyzeOptions& options) {
    options.thresholds.check();

    auto states = stage("ingest", [&] {
        return window_states(records, options.window, template_graph);
    });
    if (states.empty()) {
        throw EmptyInputError("ingest: traces produced no states");
    }

    auto merged = stage("merge", [&] {
        return renormalize_weights(merge(states, options.curve_mode));
    });
    auto annotated = stage("derive", [&] { return annotate(merged); });

    AnalyzeResult result{std::move(merged), std::move(annotated), {}, {}, {}, {}, states.size()};
    stage("analysis", [&] {
        result.report = gap_report(result.annotated, &result.skipped);
        result.categories = benchmark(result.report, options.thresholds);
        result.ranking = rank_targets(result.report);
        return 0;
    });
    return result;
}

std::string gap_report_json(const AnalyzeResult& result, const AnalyzeOptions& options) {
    json out;
    out["thresholds"] = {{"a", options.thresholds.a}, {"b", options.thresholds.b}};
    out["window_seconds"] = options.window.window_seconds;
    out["aggregation"] = to_string(options.window.aggregation);
    out["curve_mode"] = to_string(options.curve_mode);
    out["state_count"] = result.state_count;
    out["records"] = json::array();
    for (const auto& id : result.ranking) {
        const auto* record = result.report.find(id);
        json rj = record_to_json(*record);
        rj["category"] = to_string(result.categories.at(id));
        out["records"].push_back(std::move(rj));
    }
    out["ranking"] = result.ranking;
    out["skipped"] = result.skipped;
    out["zero_weight_nodes"] = result.merged.zero_weight_composites;
    return out.dump(2) + "\n";
}

std::string gap_report_csv(const AnalyzeResult& result) {
    std::string out = "component,gap,category,u_opt,u_current,eta_opt,eta_current\n";
    for (const auto& id : result.ranking) {
        const auto* record = result.report.find(id);
        out += record->id;
        out += ',';
        out += format_value(record->gap);
        out += ',';
        out += to_string(result.categories.at(id));
        out += ',';
        out += format_value(record->u_opt);
        out += ',';
        out += format_value(record->u_current);
        out += ',';
        out += format_value(record->eta_opt);
        out += ',';
        out += format_value(record->eta_current);
        out += '\n';
    }
    return out;
}

std::string curve_csv(const AnnotatedGraph& annotated, std::string_view id) {
    const auto& curve = annotated.curve_of(id);
    const auto& variance = annotated.variance_of(id);
    const std::size_t m = curve.resolution();
    std::string out = "utilization,efficiency,variance\n";
    for (std::size_t i = 0; i <= m; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(m);
        out += format_value(u);
        out += ',';
        out += format_value(curve.samples()[i]);
        out += ',';
        out += format_value(variance.samples()[i]);
        out += '\n';
    }
    return out;
}

std::string gap_record_json(const GapRecord& record) {
    return record_to_json(record).dump(2) + "\n";
}

std::string recommendation_json(const FitnessRecommendation& recommendation) {
    json out;
    out["action"] = to_string(recommendation.action);
    out["rule"] = recommendation.rule;
    out["target_variance"] = recommendation.target_variance;
    out["rationale"] = recommendation.rationale;
    out["candidates"] = json::array();
    for (const auto& candidate : recommendation.candidates) {
        out["candidates"].push_back({{"id", candidate.id},
                                     {"score", candidate.score},
                                     {"variance_contribution", candidate.variance_contribution},
                                     {"measurement_cost", candidate.measurement_cost}});
    }
    return out.dump(2) + "\n";
}

std::string validation_report_json(const ValidationReport& report) {
    json out;
    out["valid"] = report.valid();
    out["violations"] = json::array();
    for (const auto& violation : report.violations) {
        out["violations"].push_back({{"kind", to_string(violation.kind)},
                                     {"message", violation.message},
                                     {"ids", violation.ids}});
    }
    return out.dump(2) + "\n";
}

std::string write_analysis_artifacts(const AnalyzeResult& result, const AnalyzeOptions& options,
                                     const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "curves");
    const std::string report_json = gap_report_json(result, options);
    write_text_file(out_dir / "gaps.json", report_json);
    write_text_file(out_dir / "gaps.csv", gap_report_csv(result));
    for (const auto& node : result.annotated.graph().nodes()) {
        if (result.annotated.has_curves(node.id)) {
            write_text_file(out_dir / "curves" / (node.id + ".csv"),
                            curve_csv(result.annotated, node.id));
        }
    }
    return report_json;
}

std::string run_simulation(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    const Scenario scenario = generate(config);
    write_text_file(out_dir / "graph.json", graph_to_json(scenario.graph));

    json summary;
    summary["config"] = json::parse(config_to_json(config));
    summary["files"]["graph"] = "graph.json";
    summary["files"]["traces"] = json::array();
    summary["iterations"] = json::array();

    double baseline_vehicle = 0.0;
    std::map<std::string, double> baseline_watts;
    for (int iteration = 0; iteration <= config.iterations; ++iteration) {
        const std::string trace_name = "traces_iter" + std::to_string(iteration) + ".csv";
        write_text_file(out_dir / trace_name, trace_csv(config, iteration));
        summary["files"]["traces"].push_back(trace_name);

        const PowerModel model = apply_interventions(scenario.power, config, iteration);
        json entry;
        entry["iteration"] = iteration;
        entry["decision_latency_ms"] = model.decision_latency_ms;
        entry["vehicle_watts"] = model.vehicle_watts();
        for (const auto& [id, power] : model.components()) {
            entry["component_watts"][id] = power.operating_watts();
            if (iteration == 0) {
                baseline_watts[id] = power.operating_watts();
            }
        }
        if (iteration == 0) {
            baseline_vehicle = model.vehicle_watts();
        }
        summary["iterations"].push_back(std::move(entry));
    }

    const PowerModel final_model = apply_interventions(scenario.power, config, config.iterations);
    json reductions;
    for (const auto& [id, power] : final_model.components()) {
        if (power.scale != 1.0 && baseline_watts[id] > 0.0) {
            reductions[id] =
                100.0 * (baseline_watts[id] - power.operating_watts()) / baseline_watts[id];
        }
    }
    if (baseline_vehicle > 0.0) {
        reductions["vehicle"] =
            100.0 * (baseline_vehicle - final_model.vehicle_watts()) / baseline_vehicle;
    }
    summary["reductions_percent"] = std::move(reductions);

    const std::string text = summary.dump(2) + "\n";
    write_text_file(out_dir / "summary.json", text);
    return text;
}

} // namespace eccbench
