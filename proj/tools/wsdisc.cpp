// wsdisc: QoS- and reputation-aware semantic web service discovery.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 internal
// error. Machine-readable JSON goes to stdout; diagnostics go to stderr.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsdisc/agents.hpp"
#include "wsdisc/jsonio.hpp"
#include "wsdisc/matchmaking.hpp"
#include "wsdisc/ontology.hpp"
#include "wsdisc/profiles.hpp"
#include "wsdisc/qos.hpp"
#include "wsdisc/reputation.hpp"
#include "wsdisc/simulation.hpp"

namespace {

using nlohmann::json;
using namespace wsd;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Ontology load_ontology(const std::string& path) {
    return Ontology::parse(jsonio::read_file(path));
}

Request load_request(const std::string& path) {
    return parse_request(jsonio::read_file(path));
}

ServiceProfile load_profile(const std::string& path) {
    return parse_profile(jsonio::read_file(path));
}

RatingStore load_ratings_or_empty(const std::string& path) {
    if (path.empty() || !std::filesystem::exists(path)) {
        return RatingStore{};
    }
    return RatingStore::load(path);
}

/// Applies --w1/--w2 overrides: both or neither, summing to 1.
void apply_weight_flags(Request& request, const std::optional<double>& w1,
                        const std::optional<double>& w2) {
    if (w1.has_value() != w2.has_value()) {
        throw UsageError("--w1 and --w2 must be given together");
    }
    if (w1) {
        if (std::abs(*w1 + *w2 - 1.0) > 1e-9) {
            throw UsageError("--w1 and --w2 must sum to 1");
        }
        request.w1 = *w1;
        request.w2 = *w2;
        validate_request(request);
    }
}

MeasurementLog load_measurements(const std::string& path,
                                 const std::vector<ServiceProfile>& registry) {
    MeasurementLog log;
    if (path.empty()) {
        return log;
    }
    const std::string text = jsonio::read_file(path);
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = std::string_view(text).substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        const std::string where = "measurements line " + std::to_string(line_no);
        const json j = jsonio::parse_text(line, where);
        jsonio::expect_object(j, {"service", "name", "value"}, where);
        const std::string service_id = jsonio::require_string(j, "service", where);
        const std::string attr = jsonio::require_string(j, "name", where);
        const double value = jsonio::require_finite_number(j, "value", where);
        const ServiceProfile* service = nullptr;
        for (const auto& p : registry) {
            if (p.id == service_id) {
                service = &p;
                break;
            }
        }
        if (service == nullptr) {
            throw ValidationError(where + ": unknown service '" + service_id + "'");
        }
        log.record(*service, attr, value);
    }
    return log;
}

json breakdown_json(const SimilarityBreakdown& b) {
    json j;
    j["nsim"] = jsonio::sig9(b.nsim);
    j["tdsim"] = jsonio::sig9(b.tdsim);
    j["ntdsim"] = jsonio::sig9(b.ntdsim);
    j["isim"] = jsonio::sig9(b.isim);
    j["osim"] = jsonio::sig9(b.osim);
    j["iosim"] = jsonio::sig9(b.iosim);
    j["functional"] = jsonio::sig9(b.functional);
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

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string ontology;
    std::vector<std::string> profiles;
    std::vector<std::string> requests;
};

int cmd_validate(const ValidateArgs& args) {
    const Ontology ont = load_ontology(args.ontology);
    json out = json::array();
    auto append = [&out](const std::string& file, const std::vector<Violation>& violations) {
        for (const auto& v : violations) {
            json j;
            j["file"] = file;
            j["path"] = v.path;
            j["message"] = v.message;
            out.push_back(std::move(j));
        }
    };
    for (const auto& path : args.profiles) {
        append(path, validate_against_ontology(load_profile(path), ont));
    }
    for (const auto& path : args.requests) {
        append(path, validate_against_ontology(load_request(path), ont));
    }
    emit(out);
    return out.empty() ? kExitOk : kExitValidation;
}

// ------------------------------------------------------------------- match

struct MatchArgs {
    std::string ontology, request, profile;
    std::optional<double> w1, w2;
};

int cmd_match(const MatchArgs& args) {
    const Ontology ont = load_ontology(args.ontology);
    Request request = load_request(args.request);
    const ServiceProfile profile = load_profile(args.profile);
    apply_weight_flags(request, args.w1, args.w2);
    emit(breakdown_json(functional_sim(ont, request, profile)));
    return kExitOk;
}

// ---------------------------------------------------------------- discover

struct DiscoverArgs {
    std::string ontology, registry, request, ratings, measurements;
    std::optional<double> threshold;
    std::string qos_scope = "consumer";
    std::string rep_norm = "minmax";
};

ReputationNorm parse_rep_norm(const std::string& s) {
    if (s == "minmax") return ReputationNorm::minmax;
    if (s == "scale") return ReputationNorm::scale;
    throw UsageError("--rep-norm must be 'minmax' or 'scale'");
}

int cmd_discover(const DiscoverArgs& args) {
    const Ontology ont = load_ontology(args.ontology);
    Request request = load_request(args.request);
    if (args.threshold) {
        request.threshold = *args.threshold;
    }
    const std::vector<ServiceProfile> registry = load_registry(args.registry);
    const MeasurementLog log = load_measurements(args.measurements, registry);
    const RatingStore ratings = load_ratings_or_empty(args.ratings);
    const QosScope scope = parse_qos_scope(args.qos_scope);
    const ReputationNorm rep_norm = parse_rep_norm(args.rep_norm);

    std::vector<Candidate> candidates;
    for (const auto& profile : registry) {
        const SimilarityBreakdown b = functional_sim(ont, request, profile);
        if (b.functional >= request.threshold) {
            candidates.push_back(Candidate{materialize_effective(profile, log),
                                           profile.provider, b.functional, std::nullopt});
        }
    }
    const std::vector<CandidateRow> rows =
        rank_candidates(std::move(candidates), request, &ratings, scope, rep_norm);
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back(row_json(row));
    }
    emit(out);
    return kExitOk;
}

// -------------------------------------------------------------------- rate

struct RateArgs {
    std::string ratings, consumer, request, service, provider;
    std::vector<std::string> scores;
};

int cmd_rate(const RateArgs& args) {
    RatingStore store = load_ratings_or_empty(args.ratings);
    RatingRecord record;
    record.consumer = args.consumer;
    record.request = args.request;
    record.provider = args.provider;
    record.service = args.service;
    for (const auto& spec : args.scores) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw UsageError("--score expects name=integer, got '" + spec + "'");
        }
        const std::string name = spec.substr(0, eq);
        const std::string digits = spec.substr(eq + 1);
        std::size_t consumed = 0;
        int value = 0;
        try {
            value = std::stoi(digits, &consumed);
        } catch (const std::exception&) {
            throw UsageError("--score expects name=integer, got '" + spec + "'");
        }
        if (consumed != digits.size()) {
            throw UsageError("--score expects name=integer, got '" + spec + "'");
        }
        record.scores[name] = value;
    }
    record.timestamp = store.max_timestamp() + 1;
    store.add(std::move(record));
    store.save(args.ratings);
    json out;
    out["records"] = store.size();
    emit(out);
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config, out;
    bool parallel = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const std::filesystem::path config_path(args.config);
    const SimulationConfig config = parse_simulation_config(
        jsonio::read_file(config_path), config_path.parent_path());
    const SimulationResult result = run_simulation(
        config, args.parallel ? Schedule::provider_parallel : Schedule::sequential);
    if (args.out.empty()) {
        std::cout << result.report_text();
    } else {
        jsonio::write_file(args.out, result.report_text());
    }
    return kExitOk;
}

// ----------------------------------------------------------------- explain

struct ExplainArgs {
    std::string ontology, request, profile, registry, ratings, measurements;
    std::optional<double> threshold;
    std::optional<double> w1, w2;
    std::string qos_scope = "consumer";
    std::string rep_norm = "minmax";
};

json syntactic_explain(const std::string& a, const std::string& b) {
    const GramBag ba = qgram_bag(a);
    const GramBag bb = qgram_bag(b);
    json shared = json::array();
    std::size_t common = 0;
    for (const auto& [gram, count] : ba) {
        auto it = bb.find(gram);
        if (it == bb.end()) {
            continue;
        }
        const std::size_t n = std::min(count, it->second);
        common += n;
        for (std::size_t i = 0; i < n; ++i) {
            shared.push_back(std::string(gram.begin(), gram.end()));
        }
    }
    json j;
    j["request_grams"] = gram_count(ba);
    j["service_grams"] = gram_count(bb);
    j["common"] = common;
    j["shared_grams"] = std::move(shared);
    j["value"] = jsonio::sig9(syntactic_sim(a, b));
    return j;
}

json pair_explain(const Ontology& ont, const std::string& r, const std::string& s,
                  Role role) {
    const ConceptSimDetail d = concept_sim_detail(ont, r, s, role);
    json j;
    j["request"] = r;
    j["service"] = s;
    j["case"] = d.case_id;
    if (d.is_ratio) {
        j["numerator"] = d.numerator;
        j["denominator"] = d.denominator;
    }
    j["value"] = jsonio::sig9(d.value);
    return j;
}

json set_explain(const Ontology& ont, const std::vector<std::string>& request_side,
                 const std::vector<std::string>& service_side, Role role) {
    json pairs = json::array();
    for (const auto& r : request_side) {
        for (const auto& s : service_side) {
            pairs.push_back(pair_explain(ont, r, s, role));
        }
    }
    const SetSimDetail d = role == Role::input
                               ? inputs_sim_detail(ont, request_side, service_side)
                               : outputs_sim_detail(ont, request_side, service_side);
    json j;
    j["pairs"] = std::move(pairs);
    json best = json::array();
    for (const double v : d.best) {
        best.push_back(jsonio::sig9(v));
    }
    j["best"] = std::move(best);
    json sorted = json::array();
    for (const double v : d.sorted_best) {
        sorted.push_back(jsonio::sig9(v));
    }
    j["sorted"] = std::move(sorted);
    j["m"] = d.m;
    j["value"] = jsonio::sig9(d.value);
    return j;
}

json functional_explain(const Ontology& ont, const Request& request,
                        const ServiceProfile& profile) {
    json j;
    j["name"] = syntactic_explain(request.name, profile.name);
    j["description"] = syntactic_explain(request.description, profile.description);
    j["inputs"] = set_explain(ont, request.inputs, profile.inputs, Role::input);
    j["outputs"] = set_explain(ont, request.outputs, profile.outputs, Role::output);
    j["breakdown"] = breakdown_json(functional_sim(ont, request, profile));
    return j;
}

int cmd_explain(const ExplainArgs& args) {
    const Ontology ont = load_ontology(args.ontology);
    Request request = load_request(args.request);
    apply_weight_flags(request, args.w1, args.w2);
    if (args.threshold) {
        request.threshold = *args.threshold;
    }
    if (!args.profile.empty()) {
        emit(functional_explain(ont, request, load_profile(args.profile)));
        return kExitOk;
    }

    // Registry mode: walk the full pipeline and show each layer's numbers.
    const std::vector<ServiceProfile> registry = load_registry(args.registry);
    const MeasurementLog log = load_measurements(args.measurements, registry);
    const RatingStore ratings = load_ratings_or_empty(args.ratings);
    const QosScope scope = parse_qos_scope(args.qos_scope);
    const ReputationNorm rep_norm = parse_rep_norm(args.rep_norm);

    json out;
    json services = json::array();
    std::vector<Candidate> candidates;
    for (const auto& profile : registry) {
        const SimilarityBreakdown b = functional_sim(ont, request, profile);
        json js;
        js["service"] = profile.id;
        js["functional"] = functional_explain(ont, request, profile);
        js["qualified"] = b.functional >= request.threshold;
        if (b.functional >= request.threshold) {
            const ServiceProfile effective = materialize_effective(profile, log);
            const auto survivors =
                filter_candidates(std::span(&effective, 1), request.constraints, log);
            js["eliminated_by_filter"] = survivors.empty();
            if (!survivors.empty()) {
                candidates.push_back(
                    Candidate{effective, profile.provider, b.functional, std::nullopt});
            }
        }
        services.push_back(std::move(js));
    }
    out["services"] = std::move(services);

    std::vector<ServiceProfile> cohort;
    std::vector<std::string> cohort_ids;
    for (const auto& c : candidates) {
        cohort.push_back(c.profile);
        cohort_ids.push_back(c.profile.id);
    }
    json normalization = json::array();
    for (const auto& [attr, weight] : request.weights) {
        if (weight <= 0) {
            continue;
        }
        json ja;
        ja["attribute"] = attr;
        ja["weight"] = weight;
        double lo = 0.0;
        double hi = 0.0;
        bool any = false;
        json values;
        for (const auto& member : cohort) {
            const QosProperty* prop = member.find_qos(attr);
            if (prop == nullptr) {
                continue;
            }
            const double v = prop->value;
            values[member.id] = jsonio::sig9(v);
            lo = any ? std::min(lo, v) : v;
            hi = any ? std::max(hi, v) : v;
            any = true;
        }
        ja["values"] = std::move(values);
        if (any) {
            ja["min"] = jsonio::sig9(lo);
            ja["max"] = jsonio::sig9(hi);
        }
        json raws;
        json rates;
        for (const auto& id : cohort_ids) {
            raws[id] = jsonio::sig9(ratings.raw_rate(id, attr));
            rates[id] = jsonio::sig9(ratings.rate(id, attr, cohort_ids, rep_norm));
        }
        ja["rating_raws"] = std::move(raws);
        ja["rating_rates"] = std::move(rates);
        normalization.push_back(std::move(ja));
    }
    out["attributes"] = std::move(normalization);

    const std::vector<CandidateRow> rows =
        rank_candidates(std::move(candidates), request, &ratings, scope, rep_norm);
    json jrows = json::array();
    for (const auto& row : rows) {
        jrows.push_back(row_json(row));
    }
    out["rows"] = std::move(jrows);
    emit(out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic web service discovery with QoS and reputation ranking"};
    app.require_subcommand(1);

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Cross-validate files against an ontology");
    validate->add_option("ontology", validate_args.ontology, "Ontology JSON file")->required();
    validate->add_option("--profile", validate_args.profiles, "Service profile JSON file");
    validate->add_option("--request", validate_args.requests, "Request JSON file");

    MatchArgs match_args;
    auto* match = app.add_subcommand("match", "Functional similarity of a request and a profile");
    match->add_option("--ontology", match_args.ontology)->required();
    match->add_option("--request", match_args.request)->required();
    match->add_option("--profile", match_args.profile)->required();
    match->add_option("--w1", match_args.w1, "Name/description weight");
    match->add_option("--w2", match_args.w2, "Input/output weight");

    DiscoverArgs discover_args;
    auto* discover = app.add_subcommand("discover", "Rank a registry against a request");
    discover->add_option("--ontology", discover_args.ontology)->required();
    discover->add_option("--registry", discover_args.registry)->required();
    discover->add_option("--request", discover_args.request)->required();
    discover->add_option("--ratings", discover_args.ratings, "Ratings JSONL file");
    discover->add_option("--measurements", discover_args.measurements, "Measurements JSONL file");
    discover->add_option("--threshold", discover_args.threshold, "Functional threshold override");
    discover->add_option("--qos-scope", discover_args.qos_scope, "consumer|provider");
    discover->add_option("--rep-norm", discover_args.rep_norm, "minmax|scale");

    RateArgs rate_args;
    auto* rate = app.add_subcommand("rate", "Record consumer feedback for a service");
    rate->add_option("--ratings", rate_args.ratings)->required();
    rate->add_option("--consumer", rate_args.consumer)->required();
    rate->add_option("--request", rate_args.request)->required();
    rate->add_option("--service", rate_args.service)->required();
    rate->add_option("--provider", rate_args.provider)->required();
    rate->add_option("--score", rate_args.scores, "name=integer, repeatable")->required();

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Run the discovery protocol simulation");
    simulate->add_option("--config", simulate_args.config)->required();
    simulate->add_option("--out", simulate_args.out, "Report file (stdout when absent)");
    simulate->add_flag("--parallel", simulate_args.parallel, "Match providers in parallel");

    ExplainArgs explain_args;
    auto* explain = app.add_subcommand("explain", "Show every intermediate quantity");
    explain->add_option("--ontology", explain_args.ontology)->required();
    explain->add_option("--request", explain_args.request)->required();
    explain->add_option("--profile", explain_args.profile, "Explain one profile");
    explain->add_option("--registry", explain_args.registry, "Explain a whole registry");
    explain->add_option("--ratings", explain_args.ratings);
    explain->add_option("--measurements", explain_args.measurements);
    explain->add_option("--threshold", explain_args.threshold);
    explain->add_option("--qos-scope", explain_args.qos_scope, "consumer|provider");
    explain->add_option("--rep-norm", explain_args.rep_norm, "minmax|scale");
    explain->add_option("--w1", explain_args.w1);
    explain->add_option("--w2", explain_args.w2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_args);
        if (match->parsed()) return cmd_match(match_args);
        if (discover->parsed()) return cmd_discover(discover_args);
        if (rate->parsed()) return cmd_rate(rate_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (explain->parsed()) {
            if (explain_args.profile.empty() == explain_args.registry.empty()) {
                throw UsageError("explain needs exactly one of --profile or --registry");
            }
            return cmd_explain(explain_args);
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnknownConceptError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
