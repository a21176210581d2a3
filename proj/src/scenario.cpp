#include "eccbench/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace eccbench {

using nlohmann::json;

namespace {

constexpr long long trace_epoch = 1704067200; // 2024-01-01T00:00:00Z
constexpr long long trace_step_seconds = 300;
constexpr double trace_noise_sigma = 0.05;
constexpr double composite_peak_target = 0.81;
constexpr double leaf_idle_fraction = 0.35;

struct LeafSpec {
    const char* id;
    // curve shape: rise lo->hi up to the peak, then a gentle power-law fall
    double lo;
    double hi;
    double rise_exp;
    double fall_depth;
    double fall_exp;
    double natural_peak;
    double variance;
    double cost;
    double weight;     // vehicle edge weight
    double duty_scale; // operating utilization as a fraction of the solved peak
    double baseline_watts;
    double amplitude;
    double phase;
};

constexpr LeafSpec leaf_specs[] = {
    {"lidar", 0.10, 0.88, 1.5, 0.45, 1.4, 0.72, 0.026, 1.2, 0.24, 0.95, 8.0, 0.08, 0.0},
    {"camera", 0.12, 0.86, 1.6, 0.40, 1.4, 0.76, 0.024, 1.5, 0.22, 0.95, 8.0, 0.08, 0.9},
    {"gps", 0.15, 0.84, 1.4, 0.30, 1.6, 0.85, 0.004, 4.0, 0.04, 0.95, 5.0, 0.06, 1.7},
    {"processor", 0.06, 0.93, 3.2, 0.50, 1.5, 0.81, 0.002, 3.0, 0.31, 0.80, 25.0, 0.08, 2.6},
    {"comm", 0.05, 0.90, 3.5, 0.45, 1.5, 0.88, 0.002, 2.5, 0.19, 0.75, 4.0, 0.07, 3.4},
};

struct CompositeSpec {
    const char* id;
    double base_utilization;
    double amplitude;
    double phase;
};

constexpr CompositeSpec composite_specs[] = {
    {"av", 0.78, 0.05, 1.1},
    {"edge_server", 0.76, 0.05, 2.2},
    {"cloud", 0.74, 0.05, 4.1},
};

double shape_value(const LeafSpec& spec, double peak, double u) {
    if (u <= peak) {
        if (peak <= 0.0) {
            return spec.hi;
        }
        return spec.lo + (spec.hi - spec.lo) * std::pow(u / peak, spec.rise_exp);
    }
    return spec.hi - spec.fall_depth * std::pow((u - peak) / (1.0 - peak), spec.fall_exp);
}

std::vector<double> shape_samples(const LeafSpec& spec, double peak, std::size_t resolution) {
    std::vector<double> samples(resolution + 1);
    for (std::size_t i = 0; i <= resolution; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(resolution);
        samples[i] = std::clamp(shape_value(spec, peak, u), 0.0, 1.0);
    }
    return samples;
}

std::size_t argmax_index(std::span<const double> samples) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i] > samples[best]) {
            best = i;
        }
    }
    return best;
}

struct Layout {
    std::size_t resolution;
    std::map<std::string, EfficiencyCurve> leaf_curves;
    std::map<std::string, double> solved_peaks;
    std::map<std::string, double> base_utilization; // iteration-0 duty cycle
};

// Pulls the child peaks toward the composite target until the weighted-sum
// curve's argmax lands on the target grid point; t = 1 collapses all peaks
// onto the target, so the scan always terminates. Coarse grids may only
// admit an off-by-one-step match, which stays inside the stated tolerance.
Layout build_layout(const ScenarioConfig& config) {
    const std::size_t m = config.grid_resolution;
    const auto target_index =
        static_cast<std::size_t>(std::lround(composite_peak_target * static_cast<double>(m)));

    constexpr std::size_t no_step = static_cast<std::size_t>(-1);
    std::size_t exact_step = no_step;
    std::size_t near_step = no_step;
    for (std::size_t step = 0; step <= 100 && exact_step == no_step; ++step) {
        const double t = static_cast<double>(step) / 100.0;
        std::vector<double> composite(m + 1, 0.0);
        for (const auto& spec : leaf_specs) {
            const double peak = spec.natural_peak + t * (composite_peak_target - spec.natural_peak);
            const auto samples = shape_samples(spec, peak, m);
            for (std::size_t i = 0; i <= m; ++i) {
                composite[i] += spec.weight * samples[i];
            }
        }
        const std::size_t peak_index = argmax_index(composite);
        if (peak_index == target_index) {
            exact_step = step;
        } else if (near_step == no_step &&
                   (peak_index + 1 == target_index || peak_index == target_index + 1)) {
            near_step = step;
        }
    }
    const std::size_t chosen = exact_step != no_step ? exact_step
                               : near_step != no_step ? near_step
                                                      : 100;

    Layout layout;
    layout.resolution = m;
    const double t = static_cast<double>(chosen) / 100.0;
    for (const auto& spec : leaf_specs) {
        const double peak = spec.natural_peak + t * (composite_peak_target - spec.natural_peak);
        layout.solved_peaks[spec.id] = peak;
        layout.leaf_curves.emplace(spec.id, EfficiencyCurve(shape_samples(spec, peak, m)));
    }

    for (const auto& spec : leaf_specs) {
        layout.base_utilization[spec.id] = spec.duty_scale * layout.solved_peaks[spec.id];
    }
    for (const auto& spec : composite_specs) {
        layout.base_utilization[spec.id] = spec.base_utilization;
    }
    return layout;
}

// mt19937_64-backed stream with explicit uniform and Gaussian mappings, so
// the byte output does not depend on library distribution internals.
class TraceRng {
public:
    explicit TraceRng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::map<std::string, double> utilization_scale(const ScenarioConfig& config, int iteration) {
    std::map<std::string, double> scale;
    for (const auto& iv : config.interventions) {
        if (iv.iteration >= 1 && iv.iteration <= iteration) {
            auto [it, inserted] = scale.emplace(iv.target, iv.power_scale);
            if (!inserted) {
                it->second *= iv.power_scale;
            }
        }
    }
    return scale;
}

} // namespace

InterventionKind intervention_kind_from_string(std::string_view name) {
    if (name == "dvfs") {
        return InterventionKind::dvfs;
    }
    if (name == "transmission_opt") {
        return InterventionKind::transmission_opt;
    }
    throw DomainError("unknown intervention kind: " + std::string(name));
}

const char* to_string(InterventionKind kind) {
    return kind == InterventionKind::dvfs ? "dvfs" : "transmission_opt";
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig config;
    config.interventions = {
        {1, "processor", InterventionKind::dvfs, 0.8},
        {2, "comm", InterventionKind::transmission_opt, 0.75},
    };
    return config;
}

void ScenarioConfig::check() const {
    if (days < 1) {
        throw DomainError("days must be positive");
    }
    if (iterations < 0) {
        throw DomainError("iterations must be non-negative");
    }
    if (grid_resolution < 1) {
        throw DomainError("grid_resolution must be positive");
    }
    for (const auto& iv : interventions) {
        if (!(iv.power_scale > 0.0 && iv.power_scale <= 1.0)) {
            throw DomainError("power_scale must be in (0,1]");
        }
        if (iv.iteration < 1 || iv.iteration > iterations) {
            std::ostringstream msg;
            msg << "intervention on " << iv.target << " scheduled for iteration "
                << iv.iteration << " outside [1," << iterations << "]";
            throw DomainError(msg.str());
        }
        if (iv.target.empty()) {
            throw DomainError("intervention target must be non-empty");
        }
    }
}

ScenarioConfig config_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!root.is_object()) {
        throw SchemaError("scenario config: expected an object");
    }

    ScenarioConfig config = ScenarioConfig::defaults();
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            throw SchemaError("seed: expected an unsigned integer");
        }
        config.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("days")) {
        config.days = root["days"].get<int>();
    }
    if (root.contains("iterations")) {
        config.iterations = root["iterations"].get<int>();
    }
    if (root.contains("grid_resolution")) {
        config.grid_resolution = root["grid_resolution"].get<std::size_t>();
    }
    if (root.contains("interventions")) {
        if (!root["interventions"].is_array()) {
            throw SchemaError("interventions: expected an array");
        }
        config.interventions.clear();
        for (const auto& ij : root["interventions"]) {
            Intervention iv;
            iv.iteration = ij.at("iteration").get<int>();
            iv.target = ij.at("target").get<std::string>();
            iv.kind = intervention_kind_from_string(ij.at("kind").get<std::string>());
            iv.power_scale = ij.at("power_scale").get<double>();
            config.interventions.push_back(std::move(iv));
        }
    }
    config.check();
    return config;
}

std::string config_to_json(const ScenarioConfig& config) {
    json out;
    out["seed"] = config.seed;
    out["days"] = config.days;
    out["iterations"] = config.iterations;
    out["grid_resolution"] = config.grid_resolution;
    out["interventions"] = json::array();
    for (const auto& iv : config.interventions) {
        out["interventions"].push_back({{"iteration", iv.iteration},
                                        {"target", iv.target},
                                        {"kind", to_string(iv.kind)},
                                        {"power_scale", iv.power_scale}});
    }
    return out.dump(2) + "\n";
}

double ComponentPower::power_at(double utilization) const {
    const double numer = idle_fraction + (1.0 - idle_fraction) * utilization;
    const double denom = idle_fraction + (1.0 - idle_fraction) * nominal_utilization;
    return scale * baseline_watts * numer / denom;
}

void PowerModel::add(std::string id, ComponentPower power) {
    components_.emplace(std::move(id), power);
}

bool PowerModel::contains(std::string_view id) const {
    return components_.contains(std::string(id));
}

const ComponentPower& PowerModel::at(std::string_view id) const {
    auto it = components_.find(std::string(id));
    if (it == components_.end()) {
        throw UnknownNodeError("power model has no component " + std::string(id));
    }
    return it->second;
}

ComponentPower& PowerModel::at(std::string_view id) {
    auto it = components_.find(std::string(id));
    if (it == components_.end()) {
        throw UnknownNodeError("power model has no component " + std::string(id));
    }
    return it->second;
}

double PowerModel::vehicle_watts() const {
    double total = 0.0;
    for (const auto& [id, power] : components_) {
        total += power.operating_watts();
    }
    return total;
}

double PowerModel::vehicle_power_at(const std::map<std::string, double>& utilizations) const {
    double total = 0.0;
    for (const auto& [id, power] : components_) {
        auto it = utilizations.find(id);
        total += power.power_at(it == utilizations.end() ? power.nominal_utilization : it->second);
    }
    return total;
}

Scenario generate(const ScenarioConfig& config) {
    config.check();
    const Layout layout = build_layout(config);

    std::vector<ComponentNode> nodes;
    std::vector<UtilizationEdge> edges;

    for (const auto& spec : leaf_specs) {
        ComponentNode node;
        node.id = spec.id;
        node.kind = ComponentKind::measurable;
        node.curve = layout.leaf_curves.at(spec.id);
        node.variance = VarianceCurve::constant(spec.variance, layout.resolution);
        node.measurement_cost = spec.cost;
        node.current_utilization = layout.base_utilization.at(spec.id);
        nodes.push_back(std::move(node));
        edges.push_back({"av", spec.id, spec.weight});
    }
    for (const auto& spec : composite_specs) {
        ComponentNode node;
        node.id = spec.id;
        node.kind = ComponentKind::composite;
        node.epsilon = 0.0;
        node.current_utilization = spec.base_utilization;
        nodes.push_back(std::move(node));
    }
    edges.push_back({"edge_server", "av", 1.0});
    edges.push_back({"cloud", "edge_server", 1.0});

    CovarianceTable covariances;
    covariances.set("camera", "lidar", 0.0005);

    Scenario scenario;
    scenario.graph = StateGraph("nominal", std::move(nodes), std::move(edges),
                                std::move(covariances));

    for (const auto& spec : leaf_specs) {
        ComponentPower power;
        power.baseline_watts = spec.baseline_watts;
        power.idle_fraction = leaf_idle_fraction;
        power.nominal_utilization = layout.base_utilization.at(spec.id);
        scenario.power.add(spec.id, power);
    }
    return scenario;
}

PowerModel apply_interventions(const PowerModel& model, const ScenarioConfig& config,
                               int iteration) {
    if (iteration < 0 || iteration > config.iterations) {
        std::ostringstream msg;
        msg << "iteration " << iteration << " outside [0," << config.iterations << "]";
        throw DomainError(msg.str());
    }
    PowerModel result = model;
    for (const auto& iv : config.interventions) {
        if (iv.iteration < 1 || iv.iteration > iteration) {
            continue;
        }
        if (!result.contains(iv.target)) {
            throw UnknownInterventionTargetError("intervention targets unknown component " +
                                                 iv.target);
        }
        result.at(iv.target).scale *= iv.power_scale;
    }
    return result;
}

std::string trace_csv(const ScenarioConfig& config, int iteration) {
    config.check();
    if (iteration < 0 || iteration > config.iterations) {
        std::ostringstream msg;
        msg << "iteration " << iteration << " outside [0," << config.iterations << "]";
        throw DomainError(msg.str());
    }
    const Layout layout = build_layout(config);
    const auto scale = utilization_scale(config, iteration);
    const PowerModel power = apply_interventions(generate(config).power, config, iteration);

    std::map<std::string, double> bases = layout.base_utilization;
    for (const auto& [id, s] : scale) {
        auto it = bases.find(id);
        if (it == bases.end()) {
            throw UnknownInterventionTargetError("intervention targets unknown component " + id);
        }
        it->second = std::min(1.0, it->second / s);
    }

    struct Channel {
        std::string id;
        double base;
        double amplitude;
        double phase;
        bool has_power;
    };
    std::vector<Channel> channels;
    for (const auto& spec : leaf_specs) {
        channels.push_back({spec.id, bases.at(spec.id), spec.amplitude, spec.phase, true});
    }
    for (const auto& spec : composite_specs) {
        channels.push_back({spec.id, bases.at(spec.id), spec.amplitude, spec.phase, false});
    }

    TraceRng rng(config.seed);
    std::string out = "timestamp,component,utilization,power_watts\n";
    char line[160];
    const long long total_seconds = static_cast<long long>(config.days) * 86400;
    for (long long offset = 0; offset < total_seconds; offset += trace_step_seconds) {
        const long long ts = trace_epoch + offset;
        const double day_phase =
            2.0 * std::numbers::pi * static_cast<double>(offset) / 86400.0;
        for (const auto& channel : channels) {
            double u = channel.base + channel.amplitude * std::sin(day_phase + channel.phase) +
                       trace_noise_sigma * rng.gaussian();
            u = std::clamp(u, 0.0, 1.0);
            if (channel.has_power) {
                const double watts = power.at(channel.id).power_at(u);
                std::snprintf(line, sizeof line, "%lld,%s,%.6f,%.4f\n", ts, channel.id.c_str(),
                              u, watts);
            } else {
                std::snprintf(line, sizeof line, "%lld,%s,%.6f,\n", ts, channel.id.c_str(), u);
            }
            out += line;
        }
    }
    return out;
}

double error_margin(const AnnotatedGraph& annotated, std::string_view id) {
    const auto* node = annotated.graph().find(id);
    if (!node) {
        throw UnknownNodeError("no component named " + std::string(id));
    }
    if (!node->current_utilization) {
        throw MissingUtilizationError("component " + std::string(id) +
                                      " has no current utilization");
    }
    const double u = *node->current_utilization;
    const double eta = annotated.curve_of(id).evaluate(u);
    if (eta == 0.0) {
        throw ZeroEfficiencyError("efficiency of " + std::string(id) +
                                  " is zero at its current utilization");
    }
    return 100.0 * std::sqrt(annotated.variance_of(id).evaluate(u)) / eta;
}

} // namespace eccbench
