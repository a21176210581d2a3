// eccbench command-line front end. Everything goes through the C API in
// eccbench.h; this translation unit never touches the C++ core directly.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <eccbench.h>

namespace {

int exit_code_for(ecc_status status) {
    switch (status) {
    case ECC_OK:
        return 0;
    case ECC_ERR_IO:
    case ECC_ERR_PARSE:
    case ECC_ERR_SCHEMA:
    case ECC_ERR_VALIDATION:
        return 3; // input error
    default:
        return 4; // analysis error
    }
}

int fail(const char* command, ecc_status status) {
    std::fprintf(stderr, "eccbench %s: %s: %s\n", command, ecc_status_name(status),
                 ecc_last_error());
    return exit_code_for(status);
}

void print_and_free(char* text) {
    if (text) {
        std::fputs(text, stdout);
        ecc_string_free(text);
    }
}

struct AnalyzeFlags {
    long long window_seconds = 3600;
    std::string aggregation = "mean";
    double threshold_a = 0.1;
    double threshold_b = 0.3;
    std::string curve_mode = "rederive";

    ecc_analyze_options options() const {
        ecc_analyze_options opts;
        ecc_analyze_options_init(&opts);
        opts.window_seconds = window_seconds;
        opts.aggregation = aggregation.c_str();
        opts.threshold_a = threshold_a;
        opts.threshold_b = threshold_b;
        opts.curve_mode = curve_mode.c_str();
        return opts;
    }
};

void add_window_flags(CLI::App* cmd, AnalyzeFlags& flags) {
    cmd->add_option("--window", flags.window_seconds, "Window length in seconds");
    cmd->add_option("--agg", flags.aggregation, "Window aggregation: mean, p95 or max");
    cmd->add_option("--curve-mode", flags.curve_mode,
                    "Merged composite curves: rederive or average");
}

int cmd_validate(const std::string& graph_path) {
    ecc_graph* graph = nullptr;
    ecc_status status = ecc_graph_load(graph_path.c_str(), &graph);
    if (status != ECC_OK) {
        return fail("validate", status);
    }
    char* report = nullptr;
    size_t violations = 0;
    status = ecc_graph_validate(graph, &report, &violations);
    ecc_graph_free(graph);
    if (status != ECC_OK) {
        return fail("validate", status);
    }
    print_and_free(report);
    return violations == 0 ? 0 : 2;
}

int cmd_analyze(const std::string& graph_path, const std::string& traces_path,
                const AnalyzeFlags& flags, const std::string& out_dir) {
    const ecc_analyze_options opts = flags.options();
    char* summary = nullptr;
    const ecc_status status =
        ecc_analyze(graph_path.c_str(), traces_path.c_str(), &opts, out_dir.c_str(), &summary);
    if (status != ECC_OK) {
        return fail("analyze", status);
    }
    print_and_free(summary);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const ecc_simulate_overrides& overrides) {
    std::string config_text;
    const char* config_json = nullptr;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::fprintf(stderr, "eccbench simulate: cannot open %s\n", config_path.c_str());
            return 3;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        config_text = buffer.str();
        config_json = config_text.c_str();
    }
    char* summary = nullptr;
    const ecc_status status = ecc_simulate(config_json, &overrides, out_dir.c_str(), &summary);
    if (status != ECC_OK) {
        return fail("simulate", status);
    }
    print_and_free(summary);
    return 0;
}

int cmd_fitness(const std::string& graph_path, const std::string& traces_path,
                const std::string& target, double vmin, double vmax,
                const std::string& variance_at, const AnalyzeFlags& flags) {
    const ecc_analyze_options opts = flags.options();
    char* recommendation = nullptr;
    const ecc_status status =
        ecc_fitness(graph_path.c_str(), traces_path.c_str(), target.c_str(), vmin, vmax,
                    variance_at.c_str(), &opts, &recommendation);
    if (status != ECC_OK) {
        return fail("fitness", status);
    }
    print_and_free(recommendation);
    return 0;
}

int cmd_merge(const std::vector<std::string>& graph_paths, const std::string& curve_mode,
              const std::string& out_path) {
    std::vector<const char*> paths;
    paths.reserve(graph_paths.size());
    for (const auto& path : graph_paths) {
        paths.push_back(path.c_str());
    }
    char* merged = nullptr;
    const ecc_status status =
        ecc_merge_files(paths.data(), paths.size(), curve_mode.c_str(), &merged);
    if (status != ECC_OK) {
        return fail("merge", status);
    }
    if (out_path.empty()) {
        print_and_free(merged);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "eccbench merge: cannot write %s\n", out_path.c_str());
            ecc_string_free(merged);
            return 3;
        }
        out << merged;
        ecc_string_free(merged);
    }
    return 0;
}

int cmd_gap(const std::string& graph_path, const std::string& traces_path,
            const std::string& component, const AnalyzeFlags& flags) {
    const ecc_analyze_options opts = flags.options();
    char* record = nullptr;
    const ecc_status status = ecc_gap(graph_path.c_str(), traces_path.c_str(),
                                      component.c_str(), &opts, &record);
    if (status != ECC_OK) {
        return fail("gap", status);
    }
    print_and_free(record);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficiency graph benchmarking for edge-cloud systems"};
    app.require_subcommand(1);

    std::string graph_path;
    std::string traces_path;
    std::string out_dir;
    std::string out_path;
    std::string config_path;
    std::string component;
    std::string target;
    std::string variance_at = "current";
    std::vector<std::string> merge_inputs;
    double vmin = 0.0;
    double vmax = 1.0;
    AnalyzeFlags flags;

    auto* validate = app.add_subcommand("validate", "Check a state-graph file");
    validate->add_option("graph", graph_path, "Graph JSON file")->required();

    auto* analyze = app.add_subcommand("analyze", "Gap analysis over a utilization trace");
    analyze->add_option("graph", graph_path, "Graph JSON file")->required();
    analyze->add_option("traces", traces_path, "Trace CSV file")->required();
    add_window_flags(analyze, flags);
    analyze->add_option("--a", flags.threshold_a, "Well-tuned threshold");
    analyze->add_option("--b", flags.threshold_b, "Misconfigured threshold");
    analyze->add_option("--out-dir", out_dir, "Output directory")->default_val("analysis");

    auto* simulate = app.add_subcommand("simulate", "Generate the synthetic scenario");
    simulate->add_option("config", config_path, "Scenario config JSON (optional)");
    simulate->add_option("--out-dir", out_dir, "Output directory")->default_val("scenario");
    unsigned long long seed_flag = 0;
    int days_flag = -1;
    int iterations_flag = -1;
    int grid_flag = -1;
    auto* seed_opt = simulate->add_option("--seed", seed_flag, "Override the config seed");
    simulate->add_option("--days", days_flag, "Trace length in days");
    simulate->add_option("--iterations", iterations_flag, "Optimization iterations");
    simulate->add_option("--grid-resolution", grid_flag, "Curve grid resolution");

    auto* fitness = app.add_subcommand("fitness", "Model-fitness recommendation");
    fitness->add_option("graph", graph_path, "Graph JSON file")->required();
    fitness->add_option("traces", traces_path, "Trace CSV file")->required();
    fitness->add_option("--target", target, "Benchmark target component")->required();
    fitness->add_option("--vmin", vmin, "Acceptable variance lower bound");
    fitness->add_option("--vmax", vmax, "Acceptable variance upper bound");
    fitness->add_option("--variance-at", variance_at,
                        "Where the target variance is read: current, optimal or integrated");
    add_window_flags(fitness, flags);

    auto* merge = app.add_subcommand("merge", "Merge state-graph files");
    merge->add_option("graphs", merge_inputs, "Graph JSON files")->required()->expected(-1);
    merge->add_option("--curve-mode", flags.curve_mode,
                      "Merged composite curves: rederive or average");
    merge->add_option("--out", out_path, "Output file (stdout when omitted)");

    auto* gap = app.add_subcommand("gap", "Single-component efficiency gap");
    gap->add_option("graph", graph_path, "Graph JSON file")->required();
    gap->add_option("traces", traces_path, "Trace CSV file")->required();
    gap->add_option("--component", component, "Component id")->required();
    add_window_flags(gap, flags);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        return cmd_validate(graph_path);
    }
    if (analyze->parsed()) {
        return cmd_analyze(graph_path, traces_path, flags, out_dir);
    }
    if (simulate->parsed()) {
        ecc_simulate_overrides overrides{};
        overrides.has_seed = 0;
        overrides.days = days_flag;
        overrides.iterations = iterations_flag;
        overrides.grid_resolution = grid_flag;
        if (const char* env_seed = std::getenv("ECC_BENCH_SEED"); env_seed && !seed_opt->count()) {
            char* end = nullptr;
            const unsigned long long parsed = std::strtoull(env_seed, &end, 10);
            if (end == env_seed || *end != '\0') {
                std::fprintf(stderr, "eccbench simulate: ECC_BENCH_SEED is not an integer: %s\n",
                             env_seed);
                return 3;
            }
            overrides.has_seed = 1;
            overrides.seed = parsed;
        }
        if (seed_opt->count()) {
            overrides.has_seed = 1;
            overrides.seed = seed_flag;
        }
        return cmd_simulate(config_path, out_dir, overrides);
    }
    if (fitness->parsed()) {
        return cmd_fitness(graph_path, traces_path, target, vmin, vmax, variance_at, flags);
    }
    if (merge->parsed()) {
        return cmd_merge(merge_inputs, flags.curve_mode, out_path);
    }
    if (gap->parsed()) {
        return cmd_gap(graph_path, traces_path, component, flags);
    }
    return 0;
}
