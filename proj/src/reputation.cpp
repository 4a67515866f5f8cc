#include "wsdisc/reputation.hpp"

#include <algorithm>

#include "wsdisc/jsonio.hpp"

namespace wsd {

using jsonio::json;

void RatingStore::add(RatingRecord record) {
    for (const auto& [attr, score] : record.scores) {
        if (score < 0 || score > 5) {
            throw ValidationError("rating score for '" + attr + "' must lie in 0..5");
        }
    }
    records_.insert_or_assign({record.consumer, record.service}, std::move(record));
}

std::vector<RatingRecord> RatingStore::records() const {
    std::vector<RatingRecord> out;
    out.reserve(records_.size());
    for (const auto& [key, rec] : records_) {
        out.push_back(rec);
    }
    return out;
}

bool RatingStore::has_service(std::string_view service) const {
    for (const auto& [key, rec] : records_) {
        if (rec.service == service) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> RatingStore::rated_services() const {
    std::set<std::string> ids;
    for (const auto& [key, rec] : records_) {
        ids.insert(rec.service);
    }
    return {ids.begin(), ids.end()};
}

std::uint64_t RatingStore::max_timestamp() const {
    std::uint64_t t = 0;
    for (const auto& [key, rec] : records_) {
        t = std::max(t, rec.timestamp);
    }
    return t;
}

double RatingStore::raw_rate(std::string_view service, std::string_view attr) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [key, rec] : records_) {
        if (rec.service != service) {
            continue;
        }
        auto it = rec.scores.find(std::string(attr));
        if (it == rec.scores.end()) {
            continue;
        }
        sum += it->second;
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double RatingStore::rate(std::string_view service, std::string_view attr,
                         std::span<const std::string> cohort, ReputationNorm norm) const {
    const double own = raw_rate(service, attr);
    if (norm == ReputationNorm::scale) {
        return own / 5.0;
    }
    double lo = own;
    double hi = own;
    for (const auto& member : cohort) {
        const double raw = raw_rate(member, attr);
        lo = std::min(lo, raw);
        hi = std::max(hi, raw);
    }
    if (hi == lo) {
        return 1.0;
    }
    return (own - lo) / (hi - lo);
}

double RatingStore::reputation_score(std::string_view service,
                                     const std::map<std::string, int>& weights,
                                     std::span<const std::string> cohort,
                                     ReputationNorm norm) const {
    double total_weight = 0.0;
    double acc = 0.0;
    for (const auto& [attr, weight] : weights) {
        if (weight <= 0) {
            continue;
        }
        total_weight += weight;
        acc += weight * rate(service, attr, cohort, norm);
    }
    return total_weight == 0.0 ? 0.0 : acc / total_weight;
}

void RatingStore::evict(const EvictionPolicy& policy) {
    for (auto it = records_.begin(); it != records_.end();) {
        const RatingRecord& rec = it->second;
        bool drop = policy.changed_services.contains(rec.service);
        if (!drop && policy.staleness_horizon && policy.now > rec.timestamp &&
            policy.now - rec.timestamp > *policy.staleness_horizon) {
            drop = true;
        }
        it = drop ? records_.erase(it) : std::next(it);
    }
}

RatingStore RatingStore::from_jsonl(std::string_view text) {
    RatingStore store;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        const std::string where = "ratings line " + std::to_string(line_no);
        const json j = jsonio::parse_text(line, where);
        jsonio::expect_object(
            j, {"consumer", "request", "provider", "service", "scores", "timestamp"}, where);
        RatingRecord rec;
        rec.consumer = jsonio::require_string(j, "consumer", where);
        rec.request = jsonio::require_string(j, "request", where);
        rec.provider = jsonio::require_string(j, "provider", where);
        rec.service = jsonio::require_string(j, "service", where);
        const json& scores = jsonio::require_field(j, "scores", where);
        if (!scores.is_object()) {
            throw ParseError(where + ".scores: expected an object");
        }
        for (const auto& [attr, value] : scores.items()) {
            if (!value.is_number_integer()) {
                throw ParseError(where + ".scores." + attr + ": expected an integer");
            }
            rec.scores[attr] = value.get<int>();
        }
        const long long ts = jsonio::require_integer(j, "timestamp", where);
        if (ts < 0) {
            throw ParseError(where + ".timestamp: must be non-negative");
        }
        rec.timestamp = static_cast<std::uint64_t>(ts);
        store.add(std::move(rec));
    }
    return store;
}

std::string RatingStore::to_jsonl() const {
    std::string out;
    for (const auto& [key, rec] : records_) {
        nlohmann::ordered_json j;
        j["consumer"] = rec.consumer;
        j["request"] = rec.request;
        j["provider"] = rec.provider;
        j["service"] = rec.service;
        j["scores"] = rec.scores;
        j["timestamp"] = rec.timestamp;
        out += j.dump();
        out += '\n';
    }
    return out;
}

RatingStore RatingStore::load(const std::filesystem::path& path) {
    return from_jsonl(jsonio::read_file(path));
}

void RatingStore::save(const std::filesystem::path& path) const {
    jsonio::write_file(path, to_jsonl());
}

}  // namespace wsd
