#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eccbench/graph.hpp"
#include "eccbench/merge.hpp"

namespace eccbench {

struct TraceRecord {
    long long timestamp = 0; // UTC seconds
    std::string component;
    double utilization = 0.0; // in [0,1]
    std::optional<double> power_watts;
};

enum class Aggregation { mean, p95, max };

Aggregation aggregation_from_string(std::string_view name);
const char* to_string(Aggregation aggregation);

struct WindowSpec {
    long long window_seconds = 3600;
    Aggregation aggregation = Aggregation::mean;
};

StateGraph graph_from_json(const std::string& text);
std::string graph_to_json(const StateGraph& graph);

/// Parse, schema-check and validate; validation findings raise
/// ValidationError.
StateGraph load_graph(const std::filesystem::path& path);

/// Parse and schema-check only; callers inspect validate() themselves.
StateGraph load_graph_lenient(const std::filesystem::path& path);

void save_graph(const std::filesystem::path& path, const StateGraph& graph);

/// Graph JSON with derived composite curves included, marked derived.
std::string annotated_to_json(const AnnotatedGraph& annotated);

/// Graph JSON plus the contributing state ids and raw pre-normalization
/// weights.
std::string merged_to_json(const MergedGraph& merged);

/// CSV body with header `timestamp,component,utilization[,power_watts]`.
std::vector<TraceRecord> parse_traces(const std::string& text);
std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path);

/// One state graph per window: the template with per-component utilization
/// replaced by the window aggregate. Components without records in a window
/// are omitted from that state, as are edges and covariances touching them.
std::vector<StateGraph> window_states(std::span<const TraceRecord> records,
                                      const WindowSpec& spec,
                                      const StateGraph& template_graph);

std::vector<StateGraph> load_traces(const std::filesystem::path& path,
                                    const WindowSpec& spec,
                                    const StateGraph& template_graph);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace eccbench
