#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eccbench/aggregate.hpp"
#include "eccbench/graph.hpp"

namespace eccbench {

enum class InterventionKind { dvfs, transmission_opt };

InterventionKind intervention_kind_from_string(std::string_view name);
const char* to_string(InterventionKind kind);

struct Intervention {
    int iteration = 1; // first iteration the intervention is active in
    std::string target;
    InterventionKind kind = InterventionKind::dvfs;
    double power_scale = 1.0; // in (0,1]
};

struct ScenarioConfig {
    std::uint64_t seed = 20240101;
    int days = 7;
    int iterations = 2;
    std::size_t grid_resolution = 100;
    std::vector<Intervention> interventions;

    static ScenarioConfig defaults();
    void check() const;
};

ScenarioConfig config_from_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& config);

/// Power draw of one node: baseline watts scaled by a utilization load
/// factor normalized to 1 at the nominal operating utilization.
/// `operating_watts` is the draw at the fixed nominal workload; applied
/// interventions multiply into `scale`.
struct ComponentPower {
    double baseline_watts = 0.0;
    double idle_fraction = 0.35;
    double nominal_utilization = 0.5;
    double scale = 1.0;

    double operating_watts() const { return scale * baseline_watts; }
    double power_at(double utilization) const;
};

/// Vehicle power model. The vehicle draw is defined as the sum of its
/// on-board component draws; there is no independent vehicle meter.
class PowerModel {
public:
    void add(std::string id, ComponentPower power);
    bool contains(std::string_view id) const;
    const ComponentPower& at(std::string_view id) const;
    ComponentPower& at(std::string_view id);
    const std::map<std::string, ComponentPower>& components() const { return components_; }

    double vehicle_watts() const;
    double vehicle_power_at(const std::map<std::string, double>& utilizations) const;

    double decision_latency_ms = 120.0;

private:
    std::map<std::string, ComponentPower> components_;
};

struct Scenario {
    StateGraph graph;
    PowerModel power;
};

/// Deterministic intra-logistics fixture: a vehicle composite over five
/// measurable devices, chained under an edge server and a cloud platform.
/// Child curves are shaped so the derived vehicle curve peaks at 0.81 and
/// nominal draws are processor 25 W, comm 4 W, vehicle 50 W.
Scenario generate(const ScenarioConfig& config);

/// Power model after all interventions scheduled up to and including
/// `iteration`. Scaling happens at fixed delivered work.
PowerModel apply_interventions(const PowerModel& model, const ScenarioConfig& config,
                               int iteration);

/// Utilization trace CSV for one optimization iteration. Identical config
/// and iteration produce identical bytes. Interventions shift the target's
/// duty cycle up (same work on a down-scaled device) without touching the
/// noise stream.
std::string trace_csv(const ScenarioConfig& config, int iteration);

/// 100 * sqrt(sigma^2(u_current)) / eta(u_current), in percent.
double error_margin(const AnnotatedGraph& annotated, std::string_view id);

} // namespace eccbench
