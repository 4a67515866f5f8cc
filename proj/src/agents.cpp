#include "wsdisc/agents.hpp"

#include <algorithm>
#include <set>

#include "wsdisc/errors.hpp"

namespace wsd {

QosScope parse_qos_scope(std::string_view s) {
    if (s == "consumer") return QosScope::consumer;
    if (s == "provider") return QosScope::provider;
    throw ParseError("qos scope: expected 'consumer' or 'provider'");
}

std::string_view to_string(QosScope scope) {
    return scope == QosScope::consumer ? "consumer" : "provider";
}

ServiceProfile materialize_effective(const ServiceProfile& profile,
                                     const MeasurementLog& log) {
    ServiceProfile out = profile;
    for (auto& prop : out.qos) {
        prop.value = effective_value(log, profile, prop);
    }
    return out;
}

namespace {

bool passes_constraints(const ServiceProfile& service,
                        std::span<const QosConstraint> constraints) {
    static const MeasurementLog kNoLog;
    return !filter_candidates(std::span(&service, 1), constraints, kNoLog).empty();
}

}  // namespace

std::vector<CandidateRow> rank_candidates(std::vector<Candidate> candidates,
                                          const Request& request,
                                          const RatingStore* ratings, QosScope scope,
                                          ReputationNorm rep_norm) {
    static const MeasurementLog kNoLog;

    std::vector<Candidate> kept;
    kept.reserve(candidates.size());
    for (auto& c : candidates) {
        if (passes_constraints(c.profile, request.constraints)) {
            kept.push_back(std::move(c));
        }
    }

    // Cohorts for QoS normalization: the whole survivor set in consumer
    // scope, one group per provider in provider scope.
    std::map<std::string, std::vector<ServiceProfile>> groups;
    std::vector<ServiceProfile> all_profiles;
    for (const auto& c : kept) {
        all_profiles.push_back(c.profile);
        groups[c.provider].push_back(c.profile);
    }

    std::vector<std::string> cohort_ids;
    for (const auto& c : kept) {
        cohort_ids.push_back(c.profile.id);
    }

    std::vector<CandidateRow> rows;
    rows.reserve(kept.size());
    for (const auto& c : kept) {
        CandidateRow row;
        row.service = c.profile.id;
        row.provider = c.provider;
        row.functional = c.functional;
        if (scope == QosScope::provider && c.preset_qos) {
            row.qos = *c.preset_qos;
        } else {
            const auto& cohort =
                scope == QosScope::consumer ? all_profiles : groups[c.provider];
            row.qos = qos_score(c.profile, cohort, request.weights, kNoLog);
        }
        row.reputation = ratings == nullptr
                             ? 0.0
                             : ratings->reputation_score(c.profile.id, request.weights,
                                                         cohort_ids, rep_norm);
        row.overall = row.functional + row.qos + row.reputation;
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const CandidateRow& a, const CandidateRow& b) {
        if (a.overall != b.overall) {
            return a.overall > b.overall;
        }
        return a.service < b.service;
    });
    return rows;
}

ProviderAgent::ProviderAgent(std::string id, const Ontology* ont,
                             std::vector<ServiceProfile> depository)
    : id_(std::move(id)), ont_(ont), depository_(std::move(depository)) {}

DiscoverResponse ProviderAgent::handle_request(const Request& request, double threshold,
                                               const std::string& correlation,
                                               QosScope scope) const {
    std::vector<Candidate> candidates;
    for (const auto& service : depository_) {
        const SimilarityBreakdown b = functional_sim(*ont_, request, service);
        if (b.functional >= threshold) {
            candidates.push_back(Candidate{materialize_effective(service, log_), id_,
                                           b.functional, std::nullopt});
        }
    }
    // The ranking pipeline runs without a rating store: reputation is a
    // consumer-side concern. In consumer scope the QoS column is zeroed and
    // the merged cohort recomputes it.
    std::vector<Candidate> for_rank = candidates;
    const std::vector<CandidateRow> ranked =
        rank_candidates(std::move(for_rank), request, nullptr, QosScope::provider);

    DiscoverResponse response;
    response.correlation = correlation;
    response.provider = id_;
    for (const auto& row : ranked) {
        auto it = std::find_if(candidates.begin(), candidates.end(),
                               [&](const Candidate& c) { return c.profile.id == row.service; });
        response.rows.push_back(MatchedService{
            it->profile, row.functional, scope == QosScope::provider ? row.qos : 0.0});
    }
    return response;
}

void ProviderAgent::record_measurement(std::string_view service_id, std::string_view attr,
                                       double value) {
    for (const auto& service : depository_) {
        if (service.id == service_id) {
            log_.record(service, attr, value);
            return;
        }
    }
    throw ValidationError("provider '" + id_ + "' has no service '" +
                          std::string(service_id) + "'");
}

void ProviderAgent::apply_change(std::string_view service_id, std::string_view attr,
                                 double value) {
    for (auto& service : depository_) {
        if (service.id != service_id) {
            continue;
        }
        for (auto& prop : service.qos) {
            if (prop.name == attr) {
                prop.value = value;
                return;
            }
        }
        throw ValidationError("service '" + std::string(service_id) +
                              "' has no attribute '" + std::string(attr) + "'");
    }
    throw ValidationError("provider '" + id_ + "' has no service '" +
                          std::string(service_id) + "'");
}

ConsumerAgent::ConsumerAgent(const Ontology* ont, ConsumerOptions options)
    : ont_(ont), options_(options) {}

void ConsumerAgent::prune_cache() {
    for (auto it = cache_.begin(); it != cache_.end();) {
        it = ratings_.has_service(it->first) ? std::next(it) : cache_.erase(it);
    }
}

std::optional<std::vector<CandidateRow>> ConsumerAgent::handle_request(
    const Request& request, std::uint64_t now) {
    if (options_.staleness_horizon) {
        EvictionPolicy policy;
        policy.staleness_horizon = options_.staleness_horizon;
        policy.now = now;
        ratings_.evict(policy);
        prune_cache();
    }
    std::vector<Candidate> candidates;
    for (const auto& [id, snapshot] : cache_) {
        const SimilarityBreakdown b = functional_sim(*ont_, request, snapshot.profile);
        if (b.functional >= request.threshold) {
            candidates.push_back(
                Candidate{snapshot.profile, snapshot.provider, b.functional, std::nullopt});
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    return rank_candidates(std::move(candidates), request, &ratings_, options_.scope,
                           options_.rep_norm);
}

std::vector<CandidateRow> ConsumerAgent::merge_responses(
    const Request& request, std::span<const DiscoverResponse> responses,
    std::size_t provider_count) {
    std::set<std::string> providers_seen;
    for (const auto& response : responses) {
        if (!providers_seen.insert(response.provider).second) {
            throw ValidationError("duplicate response from provider '" + response.provider +
                                  "'");
        }
    }
    if (providers_seen.size() != provider_count) {
        throw ValidationError("expected one response per provider");
    }
    std::set<std::string> service_ids;
    std::vector<Candidate> candidates;
    for (const auto& response : responses) {
        for (const auto& row : response.rows) {
            if (!service_ids.insert(row.profile.id).second) {
                throw ValidationError("duplicate service id '" + row.profile.id +
                                      "' across providers");
            }
            known_[row.profile.id] = Snapshot{row.profile, response.provider};
            Candidate c{row.profile, response.provider, row.functional, std::nullopt};
            if (options_.scope == QosScope::provider) {
                c.preset_qos = row.qos;
            }
            candidates.push_back(std::move(c));
        }
    }
    return rank_candidates(std::move(candidates), request, &ratings_, options_.scope,
                           options_.rep_norm);
}

void ConsumerAgent::submit_feedback(const std::string& consumer,
                                    const std::string& request_id,
                                    const std::string& service, const std::string& provider,
                                    std::map<std::string, int> scores,
                                    std::uint64_t timestamp) {
    auto it = known_.find(service);
    if (it == known_.end()) {
        throw ValidationError("feedback for unknown service '" + service + "'");
    }
    RatingRecord record;
    record.consumer = consumer;
    record.request = request_id;
    record.provider = provider;
    record.service = service;
    record.scores = std::move(scores);
    record.timestamp = timestamp;
    ratings_.add(std::move(record));
    cache_[service] = it->second;
}

void ConsumerAgent::handle_change_notification(const std::string& service) {
    EvictionPolicy policy;
    policy.changed_services.insert(service);
    ratings_.evict(policy);
    cache_.erase(service);
    known_.erase(service);
}

bool ConsumerAgent::is_cached(std::string_view service) const {
    return cache_.contains(std::string(service));
}

double ConsumerAgent::expected_rating(std::string_view service,
                                      const Request& request) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& [attr, weight] : request.weights) {
        if (weight <= 0) {
            continue;
        }
        sum += ratings_.raw_rate(service, attr);
        ++n;
    }
    return n == 0 ? 5.0 : sum / n;
}

void ConsumerAgent::seed_known_service(ServiceProfile profile, std::string provider) {
    const std::string id = profile.id;
    known_[id] = Snapshot{std::move(profile), std::move(provider)};
    if (ratings_.has_service(id)) {
        cache_[id] = known_[id];
    }
}

}  // namespace wsd
