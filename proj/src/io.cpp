#include "eccbench/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace eccbench {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        schema_fail(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

double require_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        schema_fail(path, "expected a number");
    }
    return value.get<double>();
}

std::string require_string(const json& value, const std::string& path) {
    if (!value.is_string()) {
        schema_fail(path, "expected a string");
    }
    return value.get<std::string>();
}

double require_unit_interval(const json& value, const std::string& path) {
    const double v = require_number(value, path);
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << v << " out of range [0,1]";
        schema_fail(path, msg.str());
    }
    return v;
}

std::vector<double> parse_samples(const json& curve, const std::string& path) {
    const auto& resolution = require(curve, "grid_resolution", path);
    if (!resolution.is_number_unsigned() || resolution.get<std::size_t>() < 1) {
        schema_fail(path + ".grid_resolution", "expected a positive integer");
    }
    const std::size_t m = resolution.get<std::size_t>();
    const auto& samples = require(curve, "samples", path);
    if (!samples.is_array()) {
        schema_fail(path + ".samples", "expected an array");
    }
    if (samples.size() != m + 1) {
        std::ostringstream msg;
        msg << "expected " << m + 1 << " samples for grid_resolution " << m << ", got "
            << samples.size();
        schema_fail(path + ".samples", msg.str());
    }
    std::vector<double> values;
    values.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        values.push_back(
            require_number(samples[i], path + ".samples[" + std::to_string(i) + "]"));
    }
    return values;
}

EfficiencyCurve parse_efficiency(const json& curve, const std::string& path) {
    auto values = parse_samples(curve, path);
    try {
        return EfficiencyCurve(std::move(values));
    } catch (const DomainError& e) {
        schema_fail(path, e.what());
    }
}

VarianceCurve parse_variance(const json& curve, const std::string& path) {
    auto values = parse_samples(curve, path);
    try {
        return VarianceCurve(std::move(values));
    } catch (const DomainError& e) {
        schema_fail(path, e.what());
    }
}

json curve_to_json(std::span<const double> samples) {
    json out;
    out["grid_resolution"] = samples.size() - 1;
    out["samples"] = json::array();
    for (double v : samples) {
        out["samples"].push_back(v);
    }
    return out;
}

json node_to_json(const ComponentNode& node) {
    json out;
    out["id"] = node.id;
    out["kind"] = to_string(node.kind);
    out["measurement_cost"] = node.measurement_cost;
    if (node.kind == ComponentKind::composite) {
        out["epsilon"] = node.epsilon;
    }
    if (node.curve) {
        out["curve"] = curve_to_json(node.curve->samples());
    }
    if (node.variance) {
        out["variance"] = curve_to_json(node.variance->samples());
    }
    if (node.current_utilization) {
        out["current_utilization"] = *node.current_utilization;
    }
    return out;
}

json graph_to_json_object(const StateGraph& graph) {
    json out;
    out["version"] = 1;
    out["state_id"] = graph.state_id();
    out["nodes"] = json::array();
    for (const auto& node : graph.nodes()) {
        out["nodes"].push_back(node_to_json(node));
    }
    out["edges"] = json::array();
    for (const auto& edge : graph.edges()) {
        out["edges"].push_back({{"from", edge.from}, {"to", edge.to}, {"weight", edge.weight}});
    }
    out["covariances"] = json::array();
    for (const auto& [key, value] : graph.covariances().entries()) {
        out["covariances"].push_back({{"a", key.first}, {"b", key.second}, {"value", value}});
    }
    return out;
}

StateGraph graph_from_json_object(const json& root) {
    if (!root.is_object()) {
        throw SchemaError("top level: expected an object");
    }
    const auto& version = require(root, "version", "top level");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        schema_fail("version", "unsupported version, expected 1");
    }
    const std::string state_id = require_string(require(root, "state_id", "top level"), "state_id");

    std::vector<ComponentNode> nodes;
    const auto& nodes_json = require(root, "nodes", "top level");
    if (!nodes_json.is_array()) {
        schema_fail("nodes", "expected an array");
    }
    for (std::size_t i = 0; i < nodes_json.size(); ++i) {
        const std::string path = "nodes[" + std::to_string(i) + "]";
        const auto& nj = nodes_json[i];
        if (!nj.is_object()) {
            schema_fail(path, "expected an object");
        }
        ComponentNode node;
        node.id = require_string(require(nj, "id", path), path + ".id");
        if (node.id.empty()) {
            schema_fail(path + ".id", "id must be non-empty");
        }
        const std::string kind = require_string(require(nj, "kind", path), path + ".kind");
        if (kind == "measurable") {
            node.kind = ComponentKind::measurable;
        } else if (kind == "composite") {
            node.kind = ComponentKind::composite;
        } else {
            schema_fail(path + ".kind", "expected 'measurable' or 'composite', got '" + kind + "'");
        }
        const bool derived = nj.value("derived", false);
        if (nj.contains("curve") && !nj["curve"].is_null()) {
            if (node.kind == ComponentKind::composite && !derived) {
                schema_fail(path + ".curve", "composite nodes must not carry measured curves");
            }
            if (!derived) {
                node.curve = parse_efficiency(nj["curve"], path + ".curve");
            }
        }
        if (nj.contains("variance") && !nj["variance"].is_null() && !derived) {
            if (node.kind == ComponentKind::composite) {
                schema_fail(path + ".variance", "composite nodes must not carry measured variances");
            }
            node.variance = parse_variance(nj["variance"], path + ".variance");
        }
        if (nj.contains("epsilon")) {
            node.epsilon = require_number(nj["epsilon"], path + ".epsilon");
        }
        if (nj.contains("measurement_cost")) {
            node.measurement_cost = require_number(nj["measurement_cost"], path + ".measurement_cost");
            if (node.measurement_cost < 0.0) {
                schema_fail(path + ".measurement_cost", "must be non-negative");
            }
        }
        if (nj.contains("current_utilization") && !nj["current_utilization"].is_null()) {
            node.current_utilization =
                require_unit_interval(nj["current_utilization"], path + ".current_utilization");
        }
        nodes.push_back(std::move(node));
    }

    std::vector<UtilizationEdge> edges;
    const auto& edges_json = require(root, "edges", "top level");
    if (!edges_json.is_array()) {
        schema_fail("edges", "expected an array");
    }
    for (std::size_t i = 0; i < edges_json.size(); ++i) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        const auto& ej = edges_json[i];
        if (!ej.is_object()) {
            schema_fail(path, "expected an object");
        }
        UtilizationEdge edge;
        edge.from = require_string(require(ej, "from", path), path + ".from");
        edge.to = require_string(require(ej, "to", path), path + ".to");
        edge.weight = require_unit_interval(require(ej, "weight", path),
                                            path + " (" + edge.from + " -> " + edge.to + ") .weight");
        if (edge.from == edge.to) {
            schema_fail(path, "edge endpoints must differ: " + edge.from);
        }
        edges.push_back(std::move(edge));
    }

    CovarianceTable covariances;
    if (root.contains("covariances")) {
        const auto& cov_json = root["covariances"];
        if (!cov_json.is_array()) {
            schema_fail("covariances", "expected an array");
        }
        for (std::size_t i = 0; i < cov_json.size(); ++i) {
            const std::string path = "covariances[" + std::to_string(i) + "]";
            const auto& cj = cov_json[i];
            const std::string a = require_string(require(cj, "a", path), path + ".a");
            const std::string b = require_string(require(cj, "b", path), path + ".b");
            const double value = require_number(require(cj, "value", path), path + ".value");
            if (a == b) {
                schema_fail(path, "covariance pair must name two distinct components");
            }
            covariances.set(a, b, value);
        }
    }

    try {
        return StateGraph(state_id, std::move(nodes), std::move(edges), std::move(covariances));
    } catch (const DomainError& e) {
        throw SchemaError(e.what());
    }
}

} // namespace

StateGraph graph_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    return graph_from_json_object(root);
}

std::string graph_to_json(const StateGraph& graph) {
    return graph_to_json_object(graph).dump(2) + "\n";
}

StateGraph load_graph_lenient(const std::filesystem::path& path) {
    return graph_from_json(read_text_file(path));
}

StateGraph load_graph(const std::filesystem::path& path) {
    StateGraph graph = load_graph_lenient(path);
    const auto report = validate(graph);
    if (!report.valid()) {
        throw ValidationError(path.string() + ":\n" + report.to_string());
    }
    return graph;
}

void save_graph(const std::filesystem::path& path, const StateGraph& graph) {
    write_text_file(path, graph_to_json(graph));
}

std::string annotated_to_json(const AnnotatedGraph& annotated) {
    json out = graph_to_json_object(annotated.graph());
    for (auto& nj : out["nodes"]) {
        const std::string id = nj["id"].get<std::string>();
        if (annotated.is_derived(id)) {
            nj["curve"] = curve_to_json(annotated.curve_of(id).samples());
            nj["variance"] = curve_to_json(annotated.variance_of(id).samples());
            nj["derived"] = true;
        }
    }
    if (!annotated.underivable().empty()) {
        out["underivable"] = annotated.underivable();
    }
    return out.dump(2) + "\n";
}

std::string merged_to_json(const MergedGraph& merged) {
    json out = graph_to_json_object(merged.graph);
    out["state_ids"] = merged.state_ids;
    out["curve_mode"] = to_string(merged.curve_mode);
    if (merged.renormalized) {
        for (auto& ej : out["edges"]) {
            const auto key = std::make_pair(ej["from"].get<std::string>(),
                                            ej["to"].get<std::string>());
            auto it = merged.raw_weights.find(key);
            if (it != merged.raw_weights.end()) {
                ej["raw_weight"] = it->second;
            }
        }
        out["zero_weight_nodes"] = merged.zero_weight_composites;
    }
    return out.dump(2) + "\n";
}

Aggregation aggregation_from_string(std::string_view name) {
    if (name == "mean") {
        return Aggregation::mean;
    }
    if (name == "p95") {
        return Aggregation::p95;
    }
    if (name == "max") {
        return Aggregation::max;
    }
    throw DomainError("unknown aggregation: " + std::string(name));
}

const char* to_string(Aggregation aggregation) {
    switch (aggregation) {
    case Aggregation::mean: return "mean";
    case Aggregation::p95: return "p95";
    case Aggregation::max: return "max";
    }
    return "unknown";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void row_fail(std::size_t line_no, const std::string& what) {
    throw ParseError("row " + std::to_string(line_no) + ": " + what);
}

double parse_double_field(const std::string& field, std::size_t line_no, const char* name) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        row_fail(line_no, std::string("cannot parse ") + name + " '" + field + "'");
    }
    return v;
}

} // namespace

std::vector<TraceRecord> parse_traces(const std::string& text) {
    std::vector<TraceRecord> records;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool has_power_column = false;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line == "timestamp,component,utilization") {
                has_power_column = false;
            } else if (line == "timestamp,component,utilization,power_watts") {
                has_power_column = true;
            } else {
                row_fail(line_no,
                         "expected header 'timestamp,component,utilization[,power_watts]', got '" +
                             line + "'");
            }
            header_seen = true;
            continue;
        }

        const auto fields = split_fields(line);
        const std::size_t expected = has_power_column ? 4 : 3;
        if (fields.size() != expected) {
            row_fail(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                  std::to_string(fields.size()));
        }

        TraceRecord record;
        {
            char* end = nullptr;
            record.timestamp = std::strtoll(fields[0].c_str(), &end, 10);
            if (end == fields[0].c_str() || *end != '\0') {
                row_fail(line_no, "cannot parse timestamp '" + fields[0] + "'");
            }
        }
        record.component = fields[1];
        if (record.component.empty()) {
            row_fail(line_no, "component must be non-empty");
        }
        record.utilization = parse_double_field(fields[2], line_no, "utilization");
        if (!(record.utilization >= 0.0 && record.utilization <= 1.0)) {
            row_fail(line_no, "utilization " + fields[2] + " out of range [0,1]");
        }
        if (has_power_column && !fields[3].empty()) {
            const double watts = parse_double_field(fields[3], line_no, "power_watts");
            if (watts < 0.0) {
                row_fail(line_no, "power_watts must be non-negative");
            }
            record.power_watts = watts;
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path) {
    return parse_traces(read_text_file(path));
}

std::vector<StateGraph> window_states(std::span<const TraceRecord> records,
                                      const WindowSpec& spec,
                                      const StateGraph& template_graph) {
    if (spec.window_seconds <= 0) {
        throw DomainError("window_seconds must be positive");
    }
    if (records.empty()) {
        return {};
    }
    for (const auto& record : records) {
        if (!template_graph.contains(record.component)) {
            throw UnknownComponentError("trace names unknown component '" + record.component + "'");
        }
    }

    std::vector<const TraceRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& record : records) {
        sorted.push_back(&record);
    }
    std::sort(sorted.begin(), sorted.end(), [](const TraceRecord* a, const TraceRecord* b) {
        return std::tie(a->timestamp, a->component) < std::tie(b->timestamp, b->component);
    });

    const long long min_ts = sorted.front()->timestamp;
    const long long max_ts = sorted.back()->timestamp;
    const std::size_t window_count =
        static_cast<std::size_t>((max_ts - min_ts) / spec.window_seconds) + 1;

    // window index -> component -> raw utilizations
    std::vector<std::map<std::string, std::vector<double>>> windows(window_count);
    for (const auto* record : sorted) {
        const auto idx =
            static_cast<std::size_t>((record->timestamp - min_ts) / spec.window_seconds);
        windows[idx][record->component].push_back(record->utilization);
    }

    std::vector<StateGraph> states;
    states.reserve(window_count);
    for (std::size_t w = 0; w < window_count; ++w) {
        if (windows[w].empty()) {
            continue; // nothing observed in this window
        }
        std::vector<ComponentNode> nodes;
        for (const auto& node : template_graph.nodes()) {
            auto it = windows[w].find(node.id);
            if (it == windows[w].end()) {
                continue; // absent components are omitted from the state
            }
            std::vector<double>& values = it->second;
            double aggregate = 0.0;
            switch (spec.aggregation) {
            case Aggregation::mean: {
                double sum = 0.0;
                for (double v : values) {
                    sum += v;
                }
                aggregate = sum / static_cast<double>(values.size());
                break;
            }
            case Aggregation::p95: {
                std::sort(values.begin(), values.end());
                const auto rank = static_cast<std::size_t>(
                    std::ceil(0.95 * static_cast<double>(values.size())));
                aggregate = values[std::min(values.size() - 1, rank == 0 ? 0 : rank - 1)];
                break;
            }
            case Aggregation::max:
                aggregate = *std::max_element(values.begin(), values.end());
                break;
            }
            ComponentNode copy = node;
            copy.current_utilization = aggregate;
            nodes.push_back(std::move(copy));
        }

        std::vector<UtilizationEdge> edges;
        for (const auto& edge : template_graph.edges()) {
            if (windows[w].contains(edge.from) && windows[w].contains(edge.to)) {
                edges.push_back(edge);
            }
        }
        CovarianceTable covariances;
        for (const auto& [key, value] : template_graph.covariances().entries()) {
            if (windows[w].contains(key.first) && windows[w].contains(key.second)) {
                covariances.set(key.first, key.second, value);
            }
        }

        const long long window_start = min_ts + static_cast<long long>(w) * spec.window_seconds;
        states.emplace_back(std::to_string(window_start), std::move(nodes), std::move(edges),
                            std::move(covariances));
    }
    return states;
}

std::vector<StateGraph> load_traces(const std::filesystem::path& path, const WindowSpec& spec,
                                    const StateGraph& template_graph) {
    const auto records = load_trace_csv(path);
    return window_states(records, spec, template_graph);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace eccbench
