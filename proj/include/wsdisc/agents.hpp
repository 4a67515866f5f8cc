#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsdisc/matchmaking.hpp"
#include "wsdisc/ontology.hpp"
#include "wsdisc/profiles.hpp"
#include "wsdisc/qos.hpp"
#include "wsdisc/reputation.hpp"

namespace wsd {

/// Which agent's candidate cohort fixes the min/max for QoS normalization.
/// `provider` keeps each provider's locally normalized scores; `consumer`
/// (the default) ships raw values and normalizes over the merged cohort, so
/// scores stay comparable across providers.
enum class QosScope { consumer, provider };

QosScope parse_qos_scope(std::string_view s);
std::string_view to_string(QosScope scope);

/// One line of a ranked discovery result.
struct CandidateRow {
    std::string service;
    std::string provider;
    double functional = 0.0;
    double qos = 0.0;
    double reputation = 0.0;
    double overall = 0.0;  // functional + qos + reputation
};

/// A functionally qualified service entering the scoring pipeline. The
/// profile snapshot carries effective attribute values. `preset_qos` holds a
/// provider-computed score that must survive the merge in provider scope.
struct Candidate {
    ServiceProfile profile;
    std::string provider;
    double functional = 0.0;
    std::optional<double> preset_qos;
};

/// The scoring tail shared by every discovery path: constraint filter, QoS
/// score per scope, reputation over the surviving cohort (skipped when
/// `ratings` is null, as on the provider side), overall sum, and the
/// deterministic sort (descending overall, ties by service id).
std::vector<CandidateRow> rank_candidates(std::vector<Candidate> candidates,
                                          const Request& request,
                                          const RatingStore* ratings, QosScope scope,
                                          ReputationNorm rep_norm = ReputationNorm::minmax);

struct MatchedService {
    ServiceProfile profile;  // effective values materialized
    double functional = 0.0;
    double qos = 0.0;  // 0 in consumer scope
};

struct DiscoverResponse {
    std::string correlation;
    std::string provider;
    std::vector<MatchedService> rows;
};

/// Holds a register depository plus the measurement log for its dynamic
/// attributes, and answers discovery requests against it.
class ProviderAgent {
public:
    ProviderAgent(std::string id, const Ontology* ont,
                  std::vector<ServiceProfile> depository);

    const std::string& id() const { return id_; }
    const std::vector<ServiceProfile>& depository() const { return depository_; }

    /// Matches the request against the depository: functional threshold,
    /// constraint filter, and in provider scope the locally normalized QoS
    /// score. Reputation is always 0 here; the rating database lives with
    /// the consumer. An empty response is still a response.
    DiscoverResponse handle_request(const Request& request, double threshold,
                                    const std::string& correlation, QosScope scope) const;

    void record_measurement(std::string_view service_id, std::string_view attr,
                            double value);
    /// Updates the advertised value of one attribute (a service change).
    void apply_change(std::string_view service_id, std::string_view attr, double value);

private:
    std::string id_;
    const Ontology* ont_;
    std::vector<ServiceProfile> depository_;
    MeasurementLog log_;
};

struct ConsumerOptions {
    QosScope scope = QosScope::consumer;
    ReputationNorm rep_norm = ReputationNorm::minmax;
    std::optional<std::uint64_t> staleness_horizon = 1000;
};

/// Owns the rating database, which doubles as the discovery cache: a service
/// stays cached exactly while it has at least one rating record.
class ConsumerAgent {
public:
    ConsumerAgent(const Ontology* ont, ConsumerOptions options);

    RatingStore& ratings() { return ratings_; }
    const RatingStore& ratings() const { return ratings_; }

    /// Cache lookup: evicts stale records, then ranks the cached services
    /// whose functional similarity clears request.threshold. Returns nullopt
    /// when the cache yields no candidate, in which case the caller must
    /// broadcast the request to every provider agent.
    std::optional<std::vector<CandidateRow>> handle_request(const Request& request,
                                                            std::uint64_t now);

    /// Aggregates one response per provider into the final ranking. Service
    /// ids are globally unique; a duplicate across providers is an error.
    std::vector<CandidateRow> merge_responses(const Request& request,
                                              std::span<const DiscoverResponse> responses,
                                              std::size_t provider_count);

    /// Stores the rating (replacing any older one from the same consumer for
    /// the same service) and makes the service cache-resident.
    void submit_feedback(const std::string& consumer, const std::string& request_id,
                         const std::string& service, const std::string& provider,
                         std::map<std::string, int> scores, std::uint64_t timestamp);

    /// A changed service loses its ratings and its cache entry.
    void handle_change_notification(const std::string& service);

    bool is_cached(std::string_view service) const;
    /// Re-seeds the cache from records already in the store; only services
    /// with a known profile snapshot become cache-resident.
    void seed_known_service(ServiceProfile profile, std::string provider);

    /// Expected rating of a suggested service: mean of its stored raw
    /// ratings over the request's positively weighted attributes. Full marks
    /// when no attribute carries weight.
    double expected_rating(std::string_view service, const Request& request) const;

private:
    void prune_cache();

    struct Snapshot {
        ServiceProfile profile;
        std::string provider;
    };

    const Ontology* ont_;
    ConsumerOptions options_;
    RatingStore ratings_;
    std::map<std::string, Snapshot> cache_;  // rating-backed services
    std::map<std::string, Snapshot> known_;  // every snapshot seen in responses
};

/// Copy of the profile with every dynamic value replaced by its current
/// effective value, so downstream scoring can treat values as plain numbers.
ServiceProfile materialize_effective(const ServiceProfile& profile,
                                     const MeasurementLog& log);

}  // namespace wsd
