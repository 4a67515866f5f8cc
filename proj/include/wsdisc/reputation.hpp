#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsdisc/errors.hpp"

namespace wsd {

/// One consumer's feedback on one invoked service: an integer score 0..5 per
/// quality attribute, stamped with the logical time of the rating event.
struct RatingRecord {
    std::string consumer;
    std::string request;
    std::string provider;
    std::string service;
    std::map<std::string, int> scores;
    std::uint64_t timestamp = 0;
};

struct EvictionPolicy {
    std::set<std::string> changed_services;
    /// Records strictly older than `now - *staleness_horizon` are dropped.
    std::optional<std::uint64_t> staleness_horizon;
    std::uint64_t now = 0;
};

enum class ReputationNorm {
    minmax,  // min-max over the cohort's raw means (default)
    scale,   // raw mean divided by the 0..5 scale
};

/// Rating database: at most one record per (consumer, service); a newer
/// rating from the same consumer for the same service replaces the older
/// one. Single writer, snapshot reads.
class RatingStore {
public:
    /// Inserts or replaces; scores outside 0..5 are rejected.
    void add(RatingRecord record);

    std::size_t size() const { return records_.size(); }
    std::vector<RatingRecord> records() const;  // (consumer, service) order
    bool has_service(std::string_view service) const;
    std::vector<std::string> rated_services() const;  // sorted, unique
    std::uint64_t max_timestamp() const;

    /// Mean of the attribute's scores over this service's records; records
    /// lacking the attribute are skipped; 0 when no record carries it.
    double raw_rate(std::string_view service, std::string_view attr) const;

    /// Per-attribute reputation in [0,1]: the raw mean normalized as a
    /// monotonically increasing criterion across the cohort (all values 1
    /// when the cohort's raws coincide), or divided by 5 in scale mode.
    double rate(std::string_view service, std::string_view attr,
                std::span<const std::string> cohort,
                ReputationNorm norm = ReputationNorm::minmax) const;

    /// Weighted mean of per-attribute rates over positive weights; 0 when
    /// every weight is 0.
    double reputation_score(std::string_view service,
                            const std::map<std::string, int>& weights,
                            std::span<const std::string> cohort,
                            ReputationNorm norm = ReputationNorm::minmax) const;

    void evict(const EvictionPolicy& policy);

    /// JSON-lines persistence, one record per line, compacted on save.
    static RatingStore from_jsonl(std::string_view text);
    std::string to_jsonl() const;
    static RatingStore load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::map<std::pair<std::string, std::string>, RatingRecord> records_;
};

}  // namespace wsd
