#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsdisc/agents.hpp"
#include "wsdisc/ontology.hpp"
#include "wsdisc/profiles.hpp"
#include "wsdisc/reputation.hpp"

namespace wsd {

/// sequential: one thread end to end. provider_parallel: provider matching
/// runs on one task per provider inside each broadcast round. Both schedules
/// produce byte-identical reports; the logical event order is canonical and
/// does not depend on task completion order.
enum class Schedule { sequential, provider_parallel };

struct GeneratedAttribute {
    std::string name;
    std::string unit;
    Monotony monotony = Monotony::increase;
    QosKind kind = QosKind::static_value;
    double min = 0.0;
    double max = 1.0;
};

struct FleetService {
    ServiceProfile profile;
    std::map<std::string, double> quality;  // attr -> delivered quality in [0,1]
    std::map<std::string, double> actual;   // attr -> measured value after invocation
};

struct FleetProvider {
    std::string id;
    std::vector<FleetService> services;
};

struct ChangeEvent {
    int run = 0;
    std::string service;
    std::string attr;
    double value = 0.0;
};

struct SimulationConfig {
    std::uint64_t seed = 0;
    int runs = 0;
    int consumers = 1;
    QosScope scope = QosScope::consumer;
    ReputationNorm rep_norm = ReputationNorm::minmax;
    std::optional<std::uint64_t> staleness_horizon = 1000;
    Ontology ontology;
    Request request_template;
    std::vector<std::string> weight_attributes;  // drawn 0..5 per run, this order

    // Fleet: either generated from the seed or written out explicitly.
    bool generate = true;
    int provider_count = 0;
    int services_per_provider = 0;
    std::string io_mode = "mirror_request";  // or "sample"
    std::vector<std::string> name_pool;
    std::vector<GeneratedAttribute> attributes;
    std::vector<FleetProvider> explicit_providers;

    bool feedback_enabled = true;
    /// When set, a cache suggestion whose expected rating (mean stored raw
    /// rating over the round's positively weighted attributes) falls below
    /// this bar leaves the consumer unsatisfied, and the request is diffused
    /// to the providers instead. Absent = cache suggestions always accepted.
    std::optional<double> satisfaction_min;
    std::vector<RatingRecord> initial_ratings;
    std::vector<ChangeEvent> change_events;
};

/// Parses the simulation config JSON. Relative ontology paths resolve
/// against `base_dir` (normally the config file's directory).
SimulationConfig parse_simulation_config(std::string_view text,
                                         const std::filesystem::path& base_dir);

struct SimulationResult {
    nlohmann::json report;
    std::map<std::string, int> selections;  // every service, zeros included
    std::string report_text() const { return report.dump(2) + "\n"; }
};

/// Runs `runs` discovery rounds: draw the round's QoS weights from the
/// seeded generator, run the cache-or-broadcast protocol, record the top
/// pick, rate it per the feedback rule, and log every message with its
/// logical timestamp. Identical configs give byte-identical reports.
SimulationResult run_simulation(const SimulationConfig& config,
                                Schedule schedule = Schedule::sequential);

}  // namespace wsd
