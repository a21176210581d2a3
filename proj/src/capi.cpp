#include "eccbench.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "eccbench/pipeline.hpp"

struct ecc_graph {
    eccbench::StateGraph graph;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) {
        std::memcpy(out, text.c_str(), text.size() + 1);
    }
    return out;
}

ecc_status status_from(eccbench::ErrorCode code) {
    using eccbench::ErrorCode;
    switch (code) {
    case ErrorCode::io: return ECC_ERR_IO;
    case ErrorCode::parse: return ECC_ERR_PARSE;
    case ErrorCode::schema: return ECC_ERR_SCHEMA;
    case ErrorCode::validation: return ECC_ERR_VALIDATION;
    case ErrorCode::unknown_component: return ECC_ERR_VALIDATION;
    default: return ECC_ERR_ANALYSIS;
    }
}

template <typename Fn>
ecc_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return ECC_OK;
    } catch (const eccbench::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ECC_ERR_INTERNAL;
    }
}

ecc_status invalid_argument(const char* what) {
    g_last_error = what;
    return ECC_ERR_INVALID_ARGUMENT;
}

eccbench::AnalyzeOptions to_options(const ecc_analyze_options* options) {
    eccbench::AnalyzeOptions out;
    if (!options) {
        return out;
    }
    out.window.window_seconds = options->window_seconds;
    if (options->aggregation) {
        out.window.aggregation = eccbench::aggregation_from_string(options->aggregation);
    }
    out.thresholds.a = options->threshold_a;
    out.thresholds.b = options->threshold_b;
    if (options->curve_mode) {
        out.curve_mode = eccbench::curve_mode_from_string(options->curve_mode);
    }
    return out;
}

eccbench::AnalyzeResult analyze_paths(const char* graph_path, const char* traces_path,
                                      const eccbench::AnalyzeOptions& options) {
    const auto graph = eccbench::load_graph(graph_path);
    const auto records = eccbench::load_trace_csv(traces_path);
    return eccbench::run_analysis(graph, records, options);
}

} // namespace

extern "C" {

void ecc_analyze_options_init(ecc_analyze_options* options) {
    if (!options) {
        return;
    }
    options->window_seconds = 3600;
    options->aggregation = "mean";
    options->threshold_a = 0.1;
    options->threshold_b = 0.3;
    options->curve_mode = "rederive";
}

const char* ecc_version(void) {
    return "1.0.0";
}

const char* ecc_status_name(ecc_status status) {
    switch (status) {
    case ECC_OK: return "ok";
    case ECC_ERR_IO: return "io_error";
    case ECC_ERR_PARSE: return "parse_error";
    case ECC_ERR_SCHEMA: return "schema_error";
    case ECC_ERR_VALIDATION: return "validation_error";
    case ECC_ERR_ANALYSIS: return "analysis_error";
    case ECC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ECC_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* ecc_last_error(void) {
    return g_last_error.c_str();
}

void ecc_string_free(char* text) {
    std::free(text);
}

ecc_status ecc_graph_load(const char* path, ecc_graph** out_graph) {
    if (!path || !out_graph) {
        return invalid_argument("path and out_graph must be non-null");
    }
    return guarded([&] {
        *out_graph = new ecc_graph{eccbench::load_graph_lenient(path)};
    });
}

ecc_status ecc_graph_parse(const char* json_text, ecc_graph** out_graph) {
    if (!json_text || !out_graph) {
        return invalid_argument("json_text and out_graph must be non-null");
    }
    return guarded([&] {
        *out_graph = new ecc_graph{eccbench::graph_from_json(json_text)};
    });
}

ecc_status ecc_graph_to_json(const ecc_graph* graph, char** out_json) {
    if (!graph || !out_json) {
        return invalid_argument("graph and out_json must be non-null");
    }
    return guarded([&] {
        *out_json = dup_string(eccbench::graph_to_json(graph->graph));
    });
}

ecc_status ecc_graph_save(const ecc_graph* graph, const char* path) {
    if (!graph || !path) {
        return invalid_argument("graph and path must be non-null");
    }
    return guarded([&] { eccbench::save_graph(path, graph->graph); });
}

ecc_status ecc_graph_node_count(const ecc_graph* graph, size_t* out_count) {
    if (!graph || !out_count) {
        return invalid_argument("graph and out_count must be non-null");
    }
    *out_count = graph->graph.nodes().size();
    return ECC_OK;
}

ecc_status ecc_graph_validate(const ecc_graph* graph, char** out_report_json,
                              size_t* out_violation_count) {
    if (!graph) {
        return invalid_argument("graph must be non-null");
    }
    return guarded([&] {
        const auto report = eccbench::validate(graph->graph);
        if (out_violation_count) {
            *out_violation_count = report.violations.size();
        }
        if (out_report_json) {
            *out_report_json = dup_string(eccbench::validation_report_json(report));
        }
    });
}

ecc_status ecc_graph_derive(const ecc_graph* graph, char** out_annotated_json) {
    if (!graph || !out_annotated_json) {
        return invalid_argument("graph and out_annotated_json must be non-null");
    }
    return guarded([&] {
        const auto annotated = eccbench::derive_composites(graph->graph);
        *out_annotated_json = dup_string(eccbench::annotated_to_json(annotated));
    });
}

void ecc_graph_free(ecc_graph* graph) {
    delete graph;
}

ecc_status ecc_merge_files(const char* const* graph_paths, size_t count,
                           const char* curve_mode, char** out_merged_json) {
    if (!graph_paths || !out_merged_json) {
        return invalid_argument("graph_paths and out_merged_json must be non-null");
    }
    return guarded([&] {
        std::vector<eccbench::StateGraph> states;
        states.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            states.push_back(eccbench::load_graph(graph_paths[i]));
        }
        const auto mode = curve_mode ? eccbench::curve_mode_from_string(curve_mode)
                                     : eccbench::CurveMode::rederive;
        const auto merged = eccbench::renormalize_weights(eccbench::merge(states, mode));
        *out_merged_json = dup_string(eccbench::merged_to_json(merged));
    });
}

ecc_status ecc_analyze(const char* graph_path, const char* traces_path,
                       const ecc_analyze_options* options, const char* out_dir,
                       char** out_summary_json) {
    if (!graph_path || !traces_path || !out_dir) {
        return invalid_argument("graph_path, traces_path and out_dir must be non-null");
    }
    return guarded([&] {
        const auto opts = to_options(options);
        const auto result = analyze_paths(graph_path, traces_path, opts);
        const std::string summary = eccbench::write_analysis_artifacts(result, opts, out_dir);
        if (out_summary_json) {
            *out_summary_json = dup_string(summary);
        }
    });
}

ecc_status ecc_gap(const char* graph_path, const char* traces_path, const char* component,
                   const ecc_analyze_options* options, char** out_record_json) {
    if (!graph_path || !traces_path || !component || !out_record_json) {
        return invalid_argument("graph_path, traces_path, component and out_record_json "
                                "must be non-null");
    }
    return guarded([&] {
        const auto result = analyze_paths(graph_path, traces_path, to_options(options));
        const auto record = eccbench::efficiency_gap(result.annotated, component);
        *out_record_json = dup_string(eccbench::gap_record_json(record));
    });
}

ecc_status ecc_fitness(const char* graph_path, const char* traces_path, const char* target,
                       double variance_min, double variance_max, const char* variance_at,
                       const ecc_analyze_options* options, char** out_recommendation_json) {
    if (!graph_path || !traces_path || !target || !out_recommendation_json) {
        return invalid_argument("graph_path, traces_path, target and "
                                "out_recommendation_json must be non-null");
    }
    return guarded([&] {
        const auto result = analyze_paths(graph_path, traces_path, to_options(options));
        eccbench::FitnessTarget fitness_target;
        fitness_target.node = target;
        fitness_target.variance_min = variance_min;
        fitness_target.variance_max = variance_max;
        if (variance_at) {
            fitness_target.point = eccbench::variance_point_from_string(variance_at);
        }
        const auto recommendation = eccbench::assess(result.annotated, fitness_target);
        *out_recommendation_json = dup_string(eccbench::recommendation_json(recommendation));
    });
}

ecc_status ecc_simulate(const char* config_json, const ecc_simulate_overrides* overrides,
                        const char* out_dir, char** out_summary_json) {
    if (!out_dir) {
        return invalid_argument("out_dir must be non-null");
    }
    return guarded([&] {
        eccbench::ScenarioConfig config = config_json
            ? eccbench::config_from_json(config_json)
            : eccbench::ScenarioConfig::defaults();
        if (overrides) {
            if (overrides->has_seed) {
                config.seed = overrides->seed;
            }
            if (overrides->days > 0) {
                config.days = overrides->days;
            }
            if (overrides->iterations >= 0) {
                config.iterations = overrides->iterations;
                // Interventions scheduled past the new horizon fall away.
                std::erase_if(config.interventions, [&](const eccbench::Intervention& iv) {
                    return iv.iteration > config.iterations;
                });
            }
            if (overrides->grid_resolution > 0) {
                config.grid_resolution = static_cast<std::size_t>(overrides->grid_resolution);
            }
            config.check();
        }
        const std::string summary = eccbench::run_simulation(config, out_dir);
        if (out_summary_json) {
            *out_summary_json = dup_string(summary);
        }
    });
}

} // extern "C"
