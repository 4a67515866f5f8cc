#include "wsdisc/qos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsdisc/errors.hpp"

namespace wsd {

void MeasurementLog::record(const ServiceProfile& service, std::string_view attr,
                            double value) {
    if (!std::isfinite(value)) {
        throw ValidationError("measurement for '" + std::string(attr) + "' must be finite");
    }
    const QosProperty* prop = service.find_qos(attr);
    if (prop == nullptr) {
        throw ValidationError("service '" + service.id + "' does not declare attribute '" +
                              std::string(attr) + "'");
    }
    if (prop->kind != QosKind::dynamic_value) {
        throw ValidationError("attribute '" + std::string(attr) + "' of service '" +
                              service.id + "' is static; measurements are rejected");
    }
    observations_[{service.id, std::string(attr)}].push_back(value);
}

const std::vector<double>* MeasurementLog::observations(std::string_view service_id,
                                                        std::string_view attr) const {
    auto it = observations_.find({std::string(service_id), std::string(attr)});
    return it == observations_.end() ? nullptr : &it->second;
}

double effective_value(const MeasurementLog& log, const ServiceProfile& service,
                       const QosProperty& prop) {
    if (prop.kind == QosKind::static_value) {
        return prop.value;
    }
    const std::vector<double>* obs = log.observations(service.id, prop.name);
    if (obs == nullptr || obs->empty()) {
        return prop.value;
    }
    return std::accumulate(obs->begin(), obs->end(), 0.0) /
           static_cast<double>(obs->size());
}

std::vector<ServiceProfile> filter_candidates(std::span<const ServiceProfile> candidates,
                                              std::span<const QosConstraint> constraints,
                                              const MeasurementLog& log) {
    std::vector<ServiceProfile> kept;
    kept.reserve(candidates.size());
    for (const auto& service : candidates) {
        bool eliminated = false;
        for (const auto& constraint : constraints) {
            const QosProperty* prop = service.find_qos(constraint.name);
            if (prop == nullptr) {
                eliminated = true;  // unverifiable hard constraint
                break;
            }
            const double v = effective_value(log, service, *prop);
            if ((prop->monotony == Monotony::increase && v < constraint.threshold) ||
                (prop->monotony == Monotony::decrease && v > constraint.threshold)) {
                eliminated = true;
                break;
            }
        }
        if (!eliminated) {
            kept.push_back(service);
        }
    }
    return kept;
}

std::vector<double> normalize(std::span<const double> values, Monotony monotony) {
    if (values.empty()) {
        throw ValidationError("normalize: empty value set");
    }
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it;
    const double hi = *max_it;
    std::vector<double> out;
    out.reserve(values.size());
    for (const double v : values) {
        if (hi == lo) {
            out.push_back(1.0);
        } else if (monotony == Monotony::increase) {
            out.push_back((v - lo) / (hi - lo));
        } else {
            out.push_back((hi - v) / (hi - lo));
        }
    }
    return out;
}

double qos_score(const ServiceProfile& service, std::span<const ServiceProfile> cohort,
                 const std::map<std::string, int>& weights, const MeasurementLog& log) {
    double total_weight = 0.0;
    double acc = 0.0;
    for (const auto& [attr, weight] : weights) {
        if (weight <= 0) {
            continue;
        }
        total_weight += weight;
        const QosProperty* own = service.find_qos(attr);
        if (own == nullptr) {
            continue;  // counts as 0 in the numerator
        }
        std::vector<double> cohort_values;
        std::size_t own_index = 0;
        for (const auto& member : cohort) {
            const QosProperty* prop = member.find_qos(attr);
            if (prop == nullptr) {
                continue;
            }
            if (member.id == service.id) {
                own_index = cohort_values.size();
            }
            cohort_values.push_back(effective_value(log, member, *prop));
        }
        const std::vector<double> norm = normalize(cohort_values, own->monotony);
        acc += weight * norm[own_index];
    }
    return total_weight == 0.0 ? 0.0 : acc / total_weight;
}

}  // namespace wsd
