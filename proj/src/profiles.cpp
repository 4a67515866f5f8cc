#include "wsdisc/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wsdisc/jsonio.hpp"

namespace wsd {

using jsonio::json;

std::string_view to_string(Predicate p) {
    switch (p) {
        case Predicate::less: return "less";
        case Predicate::greater: return "greater";
        case Predicate::equal: return "equal";
    }
    return "?";
}

std::string_view to_string(Monotony m) {
    return m == Monotony::increase ? "increase" : "decrease";
}

std::string_view to_string(QosKind k) {
    return k == QosKind::static_value ? "static" : "dynamic";
}

const QosProperty* ServiceProfile::find_qos(std::string_view attr) const {
    for (const auto& q : qos) {
        if (q.name == attr) {
            return &q;
        }
    }
    return nullptr;
}

namespace {

Monotony parse_monotony(const std::string& s, const std::string& path) {
    if (s == "increase") return Monotony::increase;
    if (s == "decrease") return Monotony::decrease;
    throw ParseError(path + ": expected 'increase' or 'decrease'");
}

QosKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "static") return QosKind::static_value;
    if (s == "dynamic") return QosKind::dynamic_value;
    throw ParseError(path + ": expected 'static' or 'dynamic'");
}

Predicate parse_predicate(const std::string& s, const std::string& path) {
    if (s == "less") return Predicate::less;
    if (s == "greater") return Predicate::greater;
    if (s == "equal") return Predicate::equal;
    throw ParseError(path + ": expected 'less', 'greater' or 'equal'");
}

std::vector<std::string> parse_concept_list(const json& obj, const char* key,
                                            const std::string& owner) {
    const json& arr = jsonio::require_field(obj, key, owner);
    if (!arr.is_array()) {
        throw ParseError(owner + "." + key + ": expected an array");
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = owner + "." + key + "[" + std::to_string(i) + "]";
        if (!arr[i].is_string()) {
            throw ParseError(path + ": expected a string");
        }
        std::string name = arr[i].get<std::string>();
        if (!seen.insert(name).second) {
            throw ValidationError(path + ": duplicate entry '" + name + "'");
        }
        out.push_back(std::move(name));
    }
    return out;
}

std::vector<QosProperty> parse_qos_list(const json& obj, const std::string& owner) {
    const json& arr = jsonio::require_field(obj, "qos", owner);
    if (!arr.is_array()) {
        throw ParseError(owner + ".qos: expected an array");
    }
    std::vector<QosProperty> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = owner + ".qos[" + std::to_string(i) + "]";
        const json& q = arr[i];
        jsonio::expect_object(q, {"name", "value", "unit", "predicate", "monotony", "kind"},
                              path);
        QosProperty prop;
        prop.name = jsonio::require_string(q, "name", path);
        if (prop.name.empty()) {
            throw ValidationError(path + ".name: must be nonempty");
        }
        if (!seen.insert(prop.name).second) {
            throw ValidationError(path + ".name: duplicate attribute '" + prop.name + "'");
        }
        prop.value = jsonio::require_finite_number(q, "value", path);
        prop.unit = jsonio::require_string(q, "unit", path);
        if (q.contains("predicate")) {
            prop.predicate = parse_predicate(jsonio::require_string(q, "predicate", path),
                                             path + ".predicate");
        }
        prop.monotony = parse_monotony(jsonio::require_string(q, "monotony", path),
                                       path + ".monotony");
        prop.kind = parse_kind(jsonio::require_string(q, "kind", path), path + ".kind");
        out.push_back(std::move(prop));
    }
    return out;
}

}  // namespace

ServiceProfile parse_profile(std::string_view text) {
    const json doc = jsonio::parse_text(text, "profile");
    jsonio::expect_object(
        doc, {"id", "name", "description", "inputs", "outputs", "provider", "qos"},
        "profile");
    ServiceProfile p;
    p.id = jsonio::require_string(doc, "id", "profile");
    if (p.id.empty()) {
        throw ValidationError("profile.id: must be nonempty");
    }
    p.name = jsonio::require_string(doc, "name", "profile");
    p.description = jsonio::require_string(doc, "description", "profile");
    p.inputs = parse_concept_list(doc, "inputs", "profile");
    p.outputs = parse_concept_list(doc, "outputs", "profile");
    p.provider = jsonio::require_string(doc, "provider", "profile");
    p.qos = parse_qos_list(doc, "profile");
    return p;
}

void validate_request(const Request& r) {
    if (std::abs(r.w1 + r.w2 - 1.0) > 1e-9) {
        throw ValidationError("request: w1 + w2 must sum to 1");
    }
    if (r.w1 < 0.0 || r.w1 > 1.0 || r.w2 < 0.0 || r.w2 > 1.0) {
        throw ValidationError("request: w1 and w2 must lie in [0, 1]");
    }
    if (r.threshold < 0.0 || r.threshold > 1.0) {
        throw ValidationError("request.threshold: must lie in [0, 1]");
    }
    for (const auto& [attr, weight] : r.weights) {
        if (weight < 0 || weight > 5) {
            throw ValidationError("request.weights." + attr + ": must lie in 0..5");
        }
    }
}

Request parse_request(std::string_view text) {
    const json doc = jsonio::parse_text(text, "request");
    jsonio::expect_object(doc,
                          {"name", "description", "inputs", "outputs", "weights",
                           "constraints", "w1", "w2", "threshold"},
                          "request");
    Request r;
    r.name = jsonio::require_string(doc, "name", "request");
    r.description = jsonio::require_string(doc, "description", "request");
    r.inputs = parse_concept_list(doc, "inputs", "request");
    r.outputs = parse_concept_list(doc, "outputs", "request");

    const json& weights = jsonio::require_field(doc, "weights", "request");
    if (!weights.is_object()) {
        throw ParseError("request.weights: expected an object");
    }
    for (const auto& [attr, value] : weights.items()) {
        if (!value.is_number_integer()) {
            throw ParseError("request.weights." + attr + ": expected an integer");
        }
        r.weights[attr] = value.get<int>();
    }

    const json& constraints = jsonio::require_field(doc, "constraints", "request");
    if (!constraints.is_array()) {
        throw ParseError("request.constraints: expected an array");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const std::string path = "request.constraints[" + std::to_string(i) + "]";
        jsonio::expect_object(constraints[i], {"name", "threshold"}, path);
        r.constraints.push_back(QosConstraint{
            jsonio::require_string(constraints[i], "name", path),
            jsonio::require_finite_number(constraints[i], "threshold", path)});
    }

    if (doc.contains("w1") || doc.contains("w2")) {
        r.w1 = jsonio::require_finite_number(doc, "w1", "request");
        r.w2 = jsonio::require_finite_number(doc, "w2", "request");
    }
    if (doc.contains("threshold")) {
        r.threshold = jsonio::require_finite_number(doc, "threshold", "request");
    }
    validate_request(r);
    return r;
}

namespace {

nlohmann::ordered_json qos_to_json(const QosProperty& q) {
    nlohmann::ordered_json j;
    j["name"] = q.name;
    j["value"] = q.value;
    j["unit"] = q.unit;
    if (q.predicate) {
        j["predicate"] = std::string(to_string(*q.predicate));
    }
    j["monotony"] = std::string(to_string(q.monotony));
    j["kind"] = std::string(to_string(q.kind));
    return j;
}

}  // namespace

std::string serialize(const ServiceProfile& p) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["name"] = p.name;
    j["description"] = p.description;
    j["inputs"] = p.inputs;
    j["outputs"] = p.outputs;
    j["provider"] = p.provider;
    auto& qos = j["qos"] = nlohmann::ordered_json::array();
    for (const auto& q : p.qos) {
        qos.push_back(qos_to_json(q));
    }
    return j.dump(2) + "\n";
}

std::string serialize(const Request& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["description"] = r.description;
    j["inputs"] = r.inputs;
    j["outputs"] = r.outputs;
    j["weights"] = r.weights;
    auto& constraints = j["constraints"] = nlohmann::ordered_json::array();
    for (const auto& c : r.constraints) {
        constraints.push_back({{"name", c.name}, {"threshold", c.threshold}});
    }
    j["w1"] = r.w1;
    j["w2"] = r.w2;
    j["threshold"] = r.threshold;
    return j.dump(2) + "\n";
}

std::vector<ServiceProfile> load_registry(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error("registry is not a readable directory: " + dir.string());
    }
    std::vector<ServiceProfile> profiles;
    std::vector<std::string> problems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) {
            continue;
        }
        const fs::path file = entry.path() / "profile.json";
        if (!fs::is_regular_file(file)) {
            problems.push_back("folder '" + entry.path().filename().string() +
                               "': missing profile.json");
            continue;
        }
        try {
            profiles.push_back(parse_profile(jsonio::read_file(file)));
        } catch (const Error& e) {
            problems.push_back("folder '" + entry.path().filename().string() + "': " +
                               e.what());
        }
    }
    if (!problems.empty()) {
        std::sort(problems.begin(), problems.end());
        std::string msg = "registry '" + dir.string() + "' has malformed folders:";
        for (const auto& p : problems) {
            msg += "\n  " + p;
        }
        throw ValidationError(msg);
    }
    std::sort(profiles.begin(), profiles.end(),
              [](const ServiceProfile& a, const ServiceProfile& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < profiles.size(); ++i) {
        if (profiles[i].id == profiles[i - 1].id) {
            throw ValidationError("registry '" + dir.string() + "': duplicate service id '" +
                                  profiles[i].id + "'");
        }
    }
    return profiles;
}

namespace {

void check_concepts(const std::vector<std::string>& ids, const char* field,
                    const Ontology& ont, std::vector<Violation>& out) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!ont.has_concept(ids[i])) {
            out.push_back(Violation{std::string(field) + "[" + std::to_string(i) + "]",
                                    "unknown concept '" + ids[i] + "'"});
        }
    }
}

}  // namespace

std::vector<Violation> validate_against_ontology(const ServiceProfile& p,
                                                 const Ontology& ont) {
    std::vector<Violation> out;
    check_concepts(p.inputs, "inputs", ont, out);
    check_concepts(p.outputs, "outputs", ont, out);
    return out;
}

std::vector<Violation> validate_against_ontology(const Request& r, const Ontology& ont) {
    std::vector<Violation> out;
    check_concepts(r.inputs, "inputs", ont, out);
    check_concepts(r.outputs, "outputs", ont, out);
    return out;
}

}  // namespace wsd
