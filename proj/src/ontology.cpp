#include "wsdisc/ontology.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "wsdisc/jsonio.hpp"

namespace wsd {

using jsonio::json;

RestrictionClause RestrictionClause::universal(std::string property, std::string range) {
    return RestrictionClause{ClauseKind::universal, std::move(property), std::move(range), 0};
}

RestrictionClause RestrictionClause::exact(std::string property, std::uint64_t n) {
    return RestrictionClause{ClauseKind::exact_cardinality, std::move(property), "", n};
}

std::size_t bag_cardinality(const ClauseBag& bag) {
    std::size_t n = 0;
    for (const auto& [clause, count] : bag) {
        n += count;
    }
    return n;
}

std::size_t bag_intersection_size(const ClauseBag& a, const ClauseBag& b) {
    std::size_t n = 0;
    for (const auto& [clause, count] : a) {
        auto it = b.find(clause);
        if (it != b.end()) {
            n += std::min(count, it->second);
        }
    }
    return n;
}

std::size_t bag_union_size(const ClauseBag& a, const ClauseBag& b) {
    std::size_t n = 0;
    for (const auto& [clause, count] : a) {
        auto it = b.find(clause);
        n += it == b.end() ? count : std::max(count, it->second);
    }
    for (const auto& [clause, count] : b) {
        if (!a.contains(clause)) {
            n += count;
        }
    }
    return n;
}

namespace {

RestrictionClause parse_clause(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ParseError(path + ": expected an object");
    }
    const std::string kind = jsonio::require_string(j, "kind", path);
    if (kind == "all") {
        jsonio::expect_object(j, {"kind", "property", "range"}, path);
        return RestrictionClause::universal(jsonio::require_string(j, "property", path),
                                            jsonio::require_string(j, "range", path));
    }
    if (kind == "exact") {
        jsonio::expect_object(j, {"kind", "property", "n"}, path);
        const long long n = jsonio::require_integer(j, "n", path);
        if (n < 0) {
            throw ParseError(path + ".n: cardinality must be non-negative");
        }
        return RestrictionClause::exact(jsonio::require_string(j, "property", path),
                                        static_cast<std::uint64_t>(n));
    }
    throw ParseError(path + ".kind: expected 'all' or 'exact'");
}

std::vector<std::string> parse_name_list(const json& obj, const char* key,
                                         const std::string& path) {
    const json& arr = jsonio::require_field(obj, key, path);
    if (!arr.is_array()) {
        throw ParseError(path + "." + key + ": expected an array");
    }
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) {
            throw ParseError(path + "." + key + "[" + std::to_string(i) +
                             "]: expected a string");
        }
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

}  // namespace

Ontology Ontology::parse(std::string_view text) {
    const json doc = jsonio::parse_text(text, "ontology");
    jsonio::expect_object(doc, {"concepts"}, "ontology");
    const json& arr = jsonio::require_field(doc, "concepts", "ontology");
    if (!arr.is_array()) {
        throw ParseError("ontology.concepts: expected an array");
    }
    std::vector<ConceptDef> concepts;
    concepts.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "concepts[" + std::to_string(i) + "]";
        const json& c = arr[i];
        jsonio::expect_object(c, {"name", "parents", "equivalents", "clauses"}, path);
        ConceptDef def;
        def.name = jsonio::require_string(c, "name", path);
        if (def.name.empty()) {
            throw ParseError(path + ".name: must be nonempty");
        }
        def.parents = parse_name_list(c, "parents", path);
        def.equivalents = parse_name_list(c, "equivalents", path);
        const json& clauses = jsonio::require_field(c, "clauses", path);
        if (!clauses.is_array()) {
            throw ParseError(path + ".clauses: expected an array");
        }
        for (std::size_t k = 0; k < clauses.size(); ++k) {
            def.own_clauses.push_back(
                parse_clause(clauses[k], path + ".clauses[" + std::to_string(k) + "]"));
        }
        concepts.push_back(std::move(def));
    }
    return from_concepts(std::move(concepts));
}

Ontology Ontology::from_concepts(std::vector<ConceptDef> concepts) {
    Ontology ont;
    ont.concepts_ = std::move(concepts);
    ont.build_indices();
    return ont;
}

void Ontology::build_indices() {
    const std::size_t n = concepts_.size();
    index_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(concepts_[i].name, i).second) {
            throw ValidationError("duplicate concept '" + concepts_[i].name + "'");
        }
    }
    auto lookup = [&](const std::string& name, const std::string& role,
                      const std::string& owner) {
        auto it = index_.find(name);
        if (it == index_.end()) {
            throw ValidationError("concept '" + owner + "' references undeclared " + role +
                                  " '" + name + "'");
        }
        return it->second;
    };

    // Merge declared equivalents into nodes (union-find).
    std::vector<std::size_t> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](std::size_t x) {
        while (uf[x] != x) {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& eq : concepts_[i].equivalents) {
            uf[find(i)] = find(lookup(eq, "equivalent", concepts_[i].name));
        }
    }
    // Compact node ids in declaration order of their first member.
    node_.assign(n, 0);
    std::map<std::size_t, std::size_t> root_to_node;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        auto [it, inserted] = root_to_node.emplace(root, root_to_node.size());
        node_[i] = it->second;
    }
    const std::size_t nodes = root_to_node.size();

    // Node-level parent edges, deduplicated. A parent landing in the same
    // node is a cycle through the equivalence closure.
    std::vector<std::set<std::size_t>> parents(nodes);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : concepts_[i].parents) {
            const std::size_t pn = node_[lookup(p, "parent", concepts_[i].name)];
            if (pn == node_[i]) {
                throw ValidationError("cycle in parent graph at concept '" +
                                      concepts_[i].name + "'");
            }
            parents[node_[i]].insert(pn);
        }
    }

    // Strict ancestor sets via DFS with cycle detection.
    ancestors_.assign(nodes, {});
    std::vector<int> state(nodes, 0);  // 0 unvisited, 1 in progress, 2 done
    std::vector<std::set<std::size_t>> anc(nodes);
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        if (state[v] == 1) {
            throw ValidationError("cycle in parent graph");
        }
        if (state[v] == 2) {
            return;
        }
        state[v] = 1;
        for (std::size_t p : parents[v]) {
            self(self, p);
            anc[v].insert(p);
            anc[v].insert(anc[p].begin(), anc[p].end());
        }
        state[v] = 2;
    };
    for (std::size_t v = 0; v < nodes; ++v) {
        dfs(dfs, v);
    }
    for (std::size_t v = 0; v < nodes; ++v) {
        ancestors_[v].assign(anc[v].begin(), anc[v].end());
    }

    // Own clauses per node (all members contribute), then inherited bags.
    std::vector<ClauseBag> own(nodes);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& clause : concepts_[i].own_clauses) {
            ++own[node_[i]][clause];
        }
    }
    bags_.assign(nodes, {});
    for (std::size_t v = 0; v < nodes; ++v) {
        ClauseBag bag = own[v];
        for (std::size_t a : ancestors_[v]) {
            for (const auto& [clause, count] : own[a]) {
                bag[clause] += count;
            }
        }
        bags_[v] = std::move(bag);
    }
}

std::string Ontology::serialize() const {
    nlohmann::ordered_json doc;
    auto& arr = doc["concepts"] = nlohmann::ordered_json::array();
    for (const auto& c : concepts_) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["parents"] = c.parents;
        jc["equivalents"] = c.equivalents;
        auto& clauses = jc["clauses"] = nlohmann::ordered_json::array();
        for (const auto& clause : c.own_clauses) {
            nlohmann::ordered_json jcl;
            if (clause.kind == ClauseKind::universal) {
                jcl["kind"] = "all";
                jcl["property"] = clause.property;
                jcl["range"] = clause.range;
            } else {
                jcl["kind"] = "exact";
                jcl["property"] = clause.property;
                jcl["n"] = clause.cardinality;
            }
            clauses.push_back(std::move(jcl));
        }
        arr.push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

bool Ontology::has_concept(std::string_view name) const {
    return index_.find(name) != index_.end();
}

const ConceptDef& Ontology::definition(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw UnknownConceptError(std::string(name));
    }
    return concepts_[it->second];
}

std::vector<std::string> Ontology::concept_names() const {
    std::vector<std::string> names;
    names.reserve(concepts_.size());
    for (const auto& c : concepts_) {
        names.push_back(c.name);
    }
    return names;
}

std::size_t Ontology::node_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw UnknownConceptError(std::string(name));
    }
    return node_[it->second];
}

bool Ontology::are_same_node(std::string_view x, std::string_view y) const {
    return node_of(x) == node_of(y);
}

bool Ontology::is_strict_subclass(std::string_view x, std::string_view y) const {
    const std::size_t nx = node_of(x);
    const std::size_t ny = node_of(y);
    if (nx == ny) {
        return false;
    }
    return std::binary_search(ancestors_[nx].begin(), ancestors_[nx].end(), ny);
}

bool Ontology::has_common_ancestor(std::string_view x, std::string_view y) const {
    const auto& ax = ancestors_[node_of(x)];
    const auto& ay = ancestors_[node_of(y)];
    std::vector<std::size_t> common;
    std::set_intersection(ax.begin(), ax.end(), ay.begin(), ay.end(),
                          std::back_inserter(common));
    return !common.empty();
}

const ClauseBag& Ontology::clause_bag(std::string_view x) const {
    return bags_[node_of(x)];
}

std::size_t Ontology::nbprop(std::string_view x) const {
    return bag_cardinality(clause_bag(x));
}

}  // namespace wsd
