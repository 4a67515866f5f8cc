#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsdisc/profiles.hpp"

namespace wsd {

/// Observed values of dynamic quality attributes, per (service, attribute).
/// Appends must be serialized by the caller; reads between writes are safe.
class MeasurementLog {
public:
    /// Appends one observation. The attribute must be declared dynamic on
    /// the service; recording against a static or undeclared attribute is
    /// rejected with ValidationError.
    void record(const ServiceProfile& service, std::string_view attr, double value);

    const std::vector<double>* observations(std::string_view service_id,
                                            std::string_view attr) const;
    bool empty() const { return observations_.empty(); }

private:
    std::map<std::pair<std::string, std::string>, std::vector<double>> observations_;
};

/// Advertised value for static attributes; mean of the observations for
/// dynamic attributes, falling back to the advertised value before the
/// first observation.
double effective_value(const MeasurementLog& log, const ServiceProfile& service,
                       const QosProperty& prop);

/// Removes services that fail a hard constraint: an increase attribute below
/// the threshold or a decrease attribute above it. A service that does not
/// advertise a constrained attribute is removed as well, since the constraint
/// cannot be verified. Keeps input order; idempotent.
std::vector<ServiceProfile> filter_candidates(std::span<const ServiceProfile> candidates,
                                              std::span<const QosConstraint> constraints,
                                              const MeasurementLog& log);

/// Min-max normalization over one attribute's cohort values. All values map
/// to 1 when max equals min. For decrease attributes lower raw values map
/// higher, so that better always means closer to 1.
std::vector<double> normalize(std::span<const double> values, Monotony monotony);

/// Weighted mean of the service's normalized attribute values over the
/// attributes with a positive weight. The cohort fixes min and max per
/// attribute; an attribute the service lacks contributes 0 while its weight
/// stays in the denominator. All-zero weights give 0.
double qos_score(const ServiceProfile& service, std::span<const ServiceProfile> cohort,
                 const std::map<std::string, int>& weights, const MeasurementLog& log);

}  // namespace wsd
