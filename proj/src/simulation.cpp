#include "wsdisc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "wsdisc/jsonio.hpp"
#include "wsdisc/rng.hpp"

namespace wsd {

using jsonio::json;

namespace {

std::string pad2(int n) {
    return n < 10 ? "0" + std::to_string(n) : std::to_string(n);
}

RatingRecord parse_rating(const json& j, const std::string& path) {
    jsonio::expect_object(
        j, {"consumer", "request", "provider", "service", "scores", "timestamp"}, path);
    RatingRecord rec;
    rec.consumer = jsonio::require_string(j, "consumer", path);
    rec.request = jsonio::require_string(j, "request", path);
    rec.provider = jsonio::require_string(j, "provider", path);
    rec.service = jsonio::require_string(j, "service", path);
    const json& scores = jsonio::require_field(j, "scores", path);
    if (!scores.is_object()) {
        throw ParseError(path + ".scores: expected an object");
    }
    for (const auto& [attr, value] : scores.items()) {
        if (!value.is_number_integer()) {
            throw ParseError(path + ".scores." + attr + ": expected an integer");
        }
        rec.scores[attr] = value.get<int>();
    }
    rec.timestamp = static_cast<std::uint64_t>(jsonio::require_integer(j, "timestamp", path));
    return rec;
}

Monotony parse_monotony_str(const std::string& s, const std::string& path) {
    if (s == "increase") return Monotony::increase;
    if (s == "decrease") return Monotony::decrease;
    throw ParseError(path + ": expected 'increase' or 'decrease'");
}

QosKind parse_kind_str(const std::string& s, const std::string& path) {
    if (s == "static") return QosKind::static_value;
    if (s == "dynamic") return QosKind::dynamic_value;
    throw ParseError(path + ": expected 'static' or 'dynamic'");
}

}  // namespace

SimulationConfig parse_simulation_config(std::string_view text,
                                         const std::filesystem::path& base_dir) {
    const json doc = jsonio::parse_text(text, "simulation config");
    jsonio::expect_object(doc,
                          {"seed", "runs", "consumers", "qos_scope", "rep_norm",
                           "staleness_horizon", "ontology", "ontology_inline", "request",
                           "weight_attributes", "fleet", "feedback", "satisfaction_min",
                           "initial_ratings", "change_events"},
                          "config");
    SimulationConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(jsonio::require_integer(doc, "seed", "config"));
    const long long runs = jsonio::require_integer(doc, "runs", "config");
    if (runs < 0) {
        throw ValidationError("config.runs: must be non-negative");
    }
    cfg.runs = static_cast<int>(runs);
    if (doc.contains("consumers")) {
        const long long consumers = jsonio::require_integer(doc, "consumers", "config");
        if (consumers < 1) {
            throw ValidationError("config.consumers: must be positive");
        }
        cfg.consumers = static_cast<int>(consumers);
    }
    if (doc.contains("qos_scope")) {
        cfg.scope = parse_qos_scope(jsonio::require_string(doc, "qos_scope", "config"));
    }
    if (doc.contains("rep_norm")) {
        const std::string mode = jsonio::require_string(doc, "rep_norm", "config");
        if (mode == "minmax") {
            cfg.rep_norm = ReputationNorm::minmax;
        } else if (mode == "scale") {
            cfg.rep_norm = ReputationNorm::scale;
        } else {
            throw ParseError("config.rep_norm: expected 'minmax' or 'scale'");
        }
    }
    if (doc.contains("staleness_horizon")) {
        const long long horizon = jsonio::require_integer(doc, "staleness_horizon", "config");
        if (horizon < 0) {
            throw ValidationError("config.staleness_horizon: must be non-negative");
        }
        cfg.staleness_horizon = static_cast<std::uint64_t>(horizon);
    }

    if (doc.contains("ontology_inline")) {
        cfg.ontology = Ontology::parse(doc["ontology_inline"].dump());
    } else {
        const std::string rel = jsonio::require_string(doc, "ontology", "config");
        std::filesystem::path path(rel);
        if (path.is_relative()) {
            path = base_dir / path;
        }
        cfg.ontology = Ontology::parse(jsonio::read_file(path));
    }

    cfg.request_template =
        parse_request(jsonio::require_field(doc, "request", "config").dump());

    const json& attrs = jsonio::require_field(doc, "weight_attributes", "config");
    if (!attrs.is_array()) {
        throw ParseError("config.weight_attributes: expected an array");
    }
    for (const auto& a : attrs) {
        if (!a.is_string()) {
            throw ParseError("config.weight_attributes: expected strings");
        }
        cfg.weight_attributes.push_back(a.get<std::string>());
    }

    const json& fleet = jsonio::require_field(doc, "fleet", "config");
    const std::string mode = jsonio::require_string(fleet, "mode", "config.fleet");
    if (mode == "generate") {
        jsonio::expect_object(fleet,
                              {"mode", "providers", "services_per_provider", "io",
                               "name_pool", "attributes"},
                              "config.fleet");
        cfg.generate = true;
        cfg.provider_count =
            static_cast<int>(jsonio::require_integer(fleet, "providers", "config.fleet"));
        cfg.services_per_provider = static_cast<int>(
            jsonio::require_integer(fleet, "services_per_provider", "config.fleet"));
        if (cfg.provider_count < 1 || cfg.services_per_provider < 1) {
            throw ValidationError("config.fleet: provider and service counts must be positive");
        }
        cfg.io_mode = jsonio::optional_string(fleet, "io", "config.fleet", "mirror_request");
        if (cfg.io_mode != "mirror_request" && cfg.io_mode != "sample") {
            throw ParseError("config.fleet.io: expected 'mirror_request' or 'sample'");
        }
        if (fleet.contains("name_pool")) {
            for (const auto& n : fleet["name_pool"]) {
                cfg.name_pool.push_back(n.get<std::string>());
            }
        }
        const json& attributes = jsonio::require_field(fleet, "attributes", "config.fleet");
        if (!attributes.is_array() || attributes.empty()) {
            throw ParseError("config.fleet.attributes: expected a nonempty array");
        }
        for (std::size_t i = 0; i < attributes.size(); ++i) {
            const std::string path = "config.fleet.attributes[" + std::to_string(i) + "]";
            const json& a = attributes[i];
            jsonio::expect_object(a, {"name", "unit", "monotony", "kind", "min", "max"},
                                  path);
            GeneratedAttribute g;
            g.name = jsonio::require_string(a, "name", path);
            g.unit = jsonio::optional_string(a, "unit", path, "unit");
            g.monotony = parse_monotony_str(jsonio::require_string(a, "monotony", path),
                                            path + ".monotony");
            g.kind = parse_kind_str(jsonio::require_string(a, "kind", path), path + ".kind");
            g.min = jsonio::require_finite_number(a, "min", path);
            g.max = jsonio::require_finite_number(a, "max", path);
            if (g.max < g.min) {
                throw ValidationError(path + ": max must be >= min");
            }
            cfg.attributes.push_back(std::move(g));
        }
    } else if (mode == "explicit") {
        jsonio::expect_object(fleet, {"mode", "providers"}, "config.fleet");
        cfg.generate = false;
        const json& providers = jsonio::require_field(fleet, "providers", "config.fleet");
        if (!providers.is_array() || providers.empty()) {
            throw ParseError("config.fleet.providers: expected a nonempty array");
        }
        for (std::size_t i = 0; i < providers.size(); ++i) {
            const std::string ppath = "config.fleet.providers[" + std::to_string(i) + "]";
            const json& p = providers[i];
            jsonio::expect_object(p, {"id", "services"}, ppath);
            FleetProvider provider;
            provider.id = jsonio::require_string(p, "id", ppath);
            const json& services = jsonio::require_field(p, "services", ppath);
            if (!services.is_array() || services.empty()) {
                throw ParseError(ppath + ".services: expected a nonempty array");
            }
            for (std::size_t k = 0; k < services.size(); ++k) {
                const std::string spath = ppath + ".services[" + std::to_string(k) + "]";
                const json& s = services[k];
                jsonio::expect_object(s, {"profile", "quality", "actual"}, spath);
                FleetService service;
                service.profile =
                    parse_profile(jsonio::require_field(s, "profile", spath).dump());
                service.profile.provider = provider.id;
                if (s.contains("quality")) {
                    for (const auto& [attr, q] : s["quality"].items()) {
                        service.quality[attr] = q.get<double>();
                    }
                }
                if (s.contains("actual")) {
                    for (const auto& [attr, v] : s["actual"].items()) {
                        service.actual[attr] = v.get<double>();
                    }
                }
                provider.services.push_back(std::move(service));
            }
            cfg.explicit_providers.push_back(std::move(provider));
        }
        cfg.provider_count = static_cast<int>(cfg.explicit_providers.size());
    } else {
        throw ParseError("config.fleet.mode: expected 'generate' or 'explicit'");
    }

    if (doc.contains("feedback")) {
        const std::string fb = jsonio::require_string(doc, "feedback", "config");
        if (fb == "quality") {
            cfg.feedback_enabled = true;
        } else if (fb == "none") {
            cfg.feedback_enabled = false;
        } else {
            throw ParseError("config.feedback: expected 'quality' or 'none'");
        }
    }
    if (doc.contains("satisfaction_min")) {
        const double bar = jsonio::require_finite_number(doc, "satisfaction_min", "config");
        if (bar < 0.0 || bar > 5.0) {
            throw ValidationError("config.satisfaction_min: must lie in 0..5");
        }
        cfg.satisfaction_min = bar;
    }
    if (doc.contains("initial_ratings")) {
        const json& ratings = doc["initial_ratings"];
        if (!ratings.is_array()) {
            throw ParseError("config.initial_ratings: expected an array");
        }
        for (std::size_t i = 0; i < ratings.size(); ++i) {
            cfg.initial_ratings.push_back(parse_rating(
                ratings[i], "config.initial_ratings[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("change_events")) {
        const json& events = doc["change_events"];
        if (!events.is_array()) {
            throw ParseError("config.change_events: expected an array");
        }
        for (std::size_t i = 0; i < events.size(); ++i) {
            const std::string path = "config.change_events[" + std::to_string(i) + "]";
            const json& e = events[i];
            jsonio::expect_object(e, {"run", "service", "name", "value"}, path);
            ChangeEvent event;
            event.run = static_cast<int>(jsonio::require_integer(e, "run", path));
            event.service = jsonio::require_string(e, "service", path);
            event.attr = jsonio::require_string(e, "name", path);
            event.value = jsonio::require_finite_number(e, "value", path);
            cfg.change_events.push_back(std::move(event));
        }
    }
    return cfg;
}

namespace {

std::vector<FleetProvider> build_fleet(const SimulationConfig& cfg, DetRng& rng) {
    if (!cfg.generate) {
        return cfg.explicit_providers;
    }
    const std::vector<std::string> concepts = cfg.ontology.concept_names();
    std::vector<FleetProvider> fleet;
    for (int p = 1; p <= cfg.provider_count; ++p) {
        FleetProvider provider;
        provider.id = "p" + pad2(p);
        for (int s = 1; s <= cfg.services_per_provider; ++s) {
            FleetService service;
            ServiceProfile& profile = service.profile;
            profile.id = provider.id + "s" + pad2(s);
            profile.provider = provider.id;
            profile.name =
                cfg.name_pool.empty()
                    ? cfg.request_template.name
                    : cfg.name_pool[static_cast<std::size_t>(rng.uniform_int(
                          0, static_cast<long long>(cfg.name_pool.size()) - 1))];
            profile.description = cfg.request_template.description;
            if (cfg.io_mode == "mirror_request") {
                profile.inputs = cfg.request_template.inputs;
                profile.outputs = cfg.request_template.outputs;
            } else {
                auto sample_concepts = [&](std::size_t max_size) {
                    std::vector<std::string> pool = concepts;
                    std::vector<std::string> out;
                    const auto want = static_cast<std::size_t>(rng.uniform_int(
                        1, static_cast<long long>(std::min(max_size, pool.size()))));
                    for (std::size_t i = 0; i < want; ++i) {
                        const auto pick = static_cast<std::size_t>(rng.uniform_int(
                            0, static_cast<long long>(pool.size()) - 1));
                        out.push_back(pool[pick]);
                        pool.erase(pool.begin() + static_cast<long>(pick));
                    }
                    return out;
                };
                profile.inputs = sample_concepts(3);
                profile.outputs = sample_concepts(3);
            }
            for (const auto& attr : cfg.attributes) {
                QosProperty prop;
                prop.name = attr.name;
                prop.unit = attr.unit;
                prop.monotony = attr.monotony;
                prop.kind = attr.kind;
                prop.value = rng.uniform(attr.min, attr.max);
                const double quality = rng.uniform01();
                service.quality[attr.name] = quality;
                // Delivered value interpolates the configured range so that
                // higher quality is always the better end.
                service.actual[attr.name] =
                    attr.monotony == Monotony::increase
                        ? attr.min + quality * (attr.max - attr.min)
                        : attr.max - quality * (attr.max - attr.min);
                profile.qos.push_back(std::move(prop));
            }
            provider.services.push_back(std::move(service));
        }
        fleet.push_back(std::move(provider));
    }
    return fleet;
}

json profile_report_json(const ServiceProfile& p) {
    json j;
    j["id"] = p.id;
    j["provider"] = p.provider;
    j["name"] = p.name;
    j["description"] = p.description;
    j["inputs"] = p.inputs;
    j["outputs"] = p.outputs;
    json qos = json::array();
    for (const auto& q : p.qos) {
        json jq;
        jq["name"] = q.name;
        jq["value"] = jsonio::sig9(q.value);
        jq["unit"] = q.unit;
        jq["monotony"] = std::string(to_string(q.monotony));
        jq["kind"] = std::string(to_string(q.kind));
        qos.push_back(std::move(jq));
    }
    j["qos"] = std::move(qos);
    return j;
}

json row_json(const CandidateRow& row) {
    json j;
    j["service"] = row.service;
    j["provider"] = row.provider;
    j["functional"] = jsonio::sig9(row.functional);
    j["qos"] = jsonio::sig9(row.qos);
    j["reputation"] = jsonio::sig9(row.reputation);
    j["overall"] = jsonio::sig9(row.overall);
    return j;
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& cfg, Schedule schedule) {
    DetRng rng(cfg.seed);
    const std::vector<FleetProvider> fleet = build_fleet(cfg, rng);

    std::vector<ProviderAgent> providers;
    std::map<std::string, const FleetService*> services_by_id;
    std::map<std::string, std::size_t> provider_index;
    for (const auto& fp : fleet) {
        std::vector<ServiceProfile> depository;
        for (const auto& fs : fp.services) {
            if (!services_by_id.emplace(fs.profile.id, &fs).second) {
                throw ValidationError("duplicate service id '" + fs.profile.id +
                                      "' in fleet");
            }
            depository.push_back(fs.profile);
        }
        provider_index[fp.id] = providers.size();
        providers.emplace_back(fp.id, &cfg.ontology, std::move(depository));
    }

    ConsumerOptions options;
    options.scope = cfg.scope;
    options.rep_norm = cfg.rep_norm;
    options.staleness_horizon = cfg.staleness_horizon;
    ConsumerAgent consumer(&cfg.ontology, options);
    for (const auto& rec : cfg.initial_ratings) {
        consumer.ratings().add(rec);
    }
    // Initial ratings refer to services whose profiles the consumer already
    // knows from past interactions; seed those snapshots so the cache works.
    for (const auto& fp : fleet) {
        for (const auto& fs : fp.services) {
            if (consumer.ratings().has_service(fs.profile.id)) {
                consumer.seed_known_service(fs.profile, fp.id);
            }
        }
    }

    std::uint64_t clock = consumer.ratings().max_timestamp();
    json transcript = json::array();
    json rounds = json::array();
    std::map<std::string, int> selections;
    for (const auto& [id, fs] : services_by_id) {
        selections[id] = 0;
    }

    for (int run = 1; run <= cfg.runs; ++run) {
        // Scheduled service changes arrive before the round's request.
        for (const auto& event : cfg.change_events) {
            if (event.run != run) {
                continue;
            }
            auto it = services_by_id.find(event.service);
            if (it == services_by_id.end()) {
                throw ValidationError("change event for unknown service '" + event.service +
                                      "'");
            }
            const std::string pid = it->second->profile.provider;
            providers[provider_index[pid]].apply_change(event.service, event.attr,
                                                        event.value);
            ++clock;
            json entry;
            entry["t"] = clock;
            entry["kind"] = "change_notification";
            entry["from"] = pid;
            entry["to"] = "consumer";
            entry["service"] = event.service;
            transcript.push_back(std::move(entry));
            consumer.handle_change_notification(event.service);
        }

        Request request = cfg.request_template;
        request.weights.clear();
        for (const auto& attr : cfg.weight_attributes) {
            request.weights[attr] = static_cast<int>(rng.uniform_int(0, 5));
        }
        const std::string correlation = "run-" + std::to_string(run);

        std::optional<std::vector<CandidateRow>> cached =
            consumer.handle_request(request, clock);
        std::vector<CandidateRow> rows;
        bool from_cache = cached.has_value();
        bool dissatisfied = false;
        // An unsatisfying cache suggestion sends the request to the
        // providers after all.
        if (from_cache && cfg.satisfaction_min && !cached->empty() &&
            consumer.expected_rating(cached->front().service, request) <
                *cfg.satisfaction_min) {
            from_cache = false;
            dissatisfied = true;
        }
        if (from_cache) {
            rows = std::move(*cached);
        } else {
            for (const auto& provider : providers) {
                ++clock;
                json entry;
                entry["t"] = clock;
                entry["kind"] = "discover_request";
                entry["from"] = "consumer";
                entry["to"] = provider.id();
                entry["correlation"] = correlation;
                entry["threshold"] = jsonio::sig9(request.threshold);
                transcript.push_back(std::move(entry));
            }
            std::vector<DiscoverResponse> responses(providers.size());
            if (schedule == Schedule::provider_parallel) {
                std::vector<std::future<DiscoverResponse>> futures;
                futures.reserve(providers.size());
                for (const auto& provider : providers) {
                    futures.push_back(std::async(std::launch::async, [&] {
                        return provider.handle_request(request, request.threshold,
                                                       correlation, cfg.scope);
                    }));
                }
                for (std::size_t i = 0; i < futures.size(); ++i) {
                    responses[i] = futures[i].get();
                }
            } else {
                for (std::size_t i = 0; i < providers.size(); ++i) {
                    responses[i] = providers[i].handle_request(request, request.threshold,
                                                               correlation, cfg.scope);
                }
            }
            for (const auto& response : responses) {
                ++clock;
                json entry;
                entry["t"] = clock;
                entry["kind"] = "discover_response";
                entry["from"] = response.provider;
                entry["to"] = "consumer";
                entry["correlation"] = correlation;
                json ids = json::array();
                for (const auto& row : response.rows) {
                    ids.push_back(row.profile.id);
                }
                entry["services"] = std::move(ids);
                transcript.push_back(std::move(entry));
            }
            rows = consumer.merge_responses(request, responses, providers.size());
        }

        json round;
        round["run"] = run;
        json weights;
        for (const auto& [attr, w] : request.weights) {
            weights[attr] = w;
        }
        round["weights"] = std::move(weights);
        round["path"] = from_cache ? "cache" : "broadcast";
        if (dissatisfied) {
            round["dissatisfied"] = true;
        }
        json row_list = json::array();
        for (const auto& row : rows) {
            row_list.push_back(row_json(row));
        }
        round["rows"] = std::move(row_list);

        if (!rows.empty()) {
            const CandidateRow& top = rows.front();
            ++selections[top.service];
            round["top"] = top.service;
            if (cfg.feedback_enabled) {
                const FleetService& fs = *services_by_id.at(top.service);
                std::map<std::string, int> scores;
                for (const auto& prop : fs.profile.qos) {
                    const auto it = fs.quality.find(prop.name);
                    const double q = it == fs.quality.end() ? 0.5 : it->second;
                    const long score = std::lround(5.0 * q);
                    scores[prop.name] = static_cast<int>(std::clamp(score, 0L, 5L));
                }
                const std::string consumer_id =
                    "c" + std::to_string(1 + (run - 1) % cfg.consumers);
                ++clock;  // the rating event
                consumer.submit_feedback(consumer_id, correlation, top.service,
                                         top.provider, scores, clock);
                json feedback;
                feedback["consumer"] = consumer_id;
                json jscores;
                for (const auto& [attr, score] : scores) {
                    jscores[attr] = score;
                }
                feedback["scores"] = std::move(jscores);
                round["feedback"] = std::move(feedback);
                // Post-invocation monitoring: the provider captures actual
                // values of the dynamic attributes.
                ProviderAgent& provider = providers[provider_index.at(top.provider)];
                for (const auto& prop : fs.profile.qos) {
                    if (prop.kind != QosKind::dynamic_value) {
                        continue;
                    }
                    const auto it = fs.actual.find(prop.name);
                    if (it != fs.actual.end()) {
                        provider.record_measurement(top.service, prop.name, it->second);
                    }
                }
            }
        } else {
            round["top"] = nullptr;
        }
        rounds.push_back(std::move(round));
    }

    SimulationResult result;
    json& report = result.report;
    report["seed"] = cfg.seed;
    report["runs"] = cfg.runs;
    report["consumers"] = cfg.consumers;
    report["qos_scope"] = std::string(to_string(cfg.scope));
    report["provider_count"] = providers.size();
    json services = json::array();
    for (const auto& [id, fs] : services_by_id) {
        services.push_back(profile_report_json(fs->profile));
    }
    report["services"] = std::move(services);
    json sel;
    for (const auto& [id, count] : selections) {
        sel[id] = count;
    }
    report["selections"] = std::move(sel);
    report["rounds"] = std::move(rounds);
    report["transcript"] = std::move(transcript);
    result.selections = std::move(selections);
    return result;
}

}  // namespace wsd
