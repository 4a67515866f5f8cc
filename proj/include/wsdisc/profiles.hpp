#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsdisc/ontology.hpp"

namespace wsd {

enum class Predicate { less, greater, equal };
enum class Monotony { increase, decrease };
enum class QosKind { static_value, dynamic_value };

std::string_view to_string(Predicate p);
std::string_view to_string(Monotony m);
std::string_view to_string(QosKind k);

/// One advertised quality attribute. `predicate` is informational metadata;
/// filter direction and normalization direction derive from `monotony` only.
struct QosProperty {
    std::string name;
    double value = 0.0;
    std::string unit;
    std::optional<Predicate> predicate;
    Monotony monotony = Monotony::increase;
    QosKind kind = QosKind::static_value;
};

struct ServiceProfile {
    std::string id;
    std::string name;
    std::string description;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<QosProperty> qos;
    std::string provider;

    const QosProperty* find_qos(std::string_view attr) const;
};

/// Hard bound on one quality attribute; the attribute's monotony decides
/// whether it is a floor or a ceiling.
struct QosConstraint {
    std::string name;
    double threshold = 0.0;
};

struct Request {
    std::string name;
    std::string description;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, int> weights;  // attribute -> importance 0..5
    std::vector<QosConstraint> constraints;
    double w1 = 0.5;        // confidence in name/description similarity
    double w2 = 0.5;        // confidence in input/output similarity
    double threshold = 0.5; // minimum functional similarity for candidacy
};

ServiceProfile parse_profile(std::string_view text);
Request parse_request(std::string_view text);
std::string serialize(const ServiceProfile& profile);
std::string serialize(const Request& request);

/// Checks the w1/w2/threshold/weight invariants on an already-built request.
void validate_request(const Request& request);

/// Loads `<dir>/<service-id>/profile.json` for every service folder, sorted
/// by id. Malformed folders and duplicate ids raise ValidationError naming
/// the offender; nothing is skipped silently.
std::vector<ServiceProfile> load_registry(const std::filesystem::path& dir);

struct Violation {
    std::string path;     // e.g. "inputs[0]"
    std::string message;  // e.g. "unknown concept 'Dragon'"
};

/// Empty iff every input/output identifier is declared in the ontology.
std::vector<Violation> validate_against_ontology(const ServiceProfile& profile,
                                                 const Ontology& ont);
std::vector<Violation> validate_against_ontology(const Request& request,
                                                 const Ontology& ont);

}  // namespace wsd
