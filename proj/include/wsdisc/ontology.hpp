#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wsdisc/errors.hpp"

namespace wsd {

enum class ClauseKind { universal, exact_cardinality };

/// One restriction conjunct of a concept definition: either a universal
/// value restriction over a property (with a range identifier) or an exact
/// cardinality bound on a property. Range identifiers are opaque: they do
/// not have to name declared concepts.
struct RestrictionClause {
    ClauseKind kind;
    std::string property;
    std::string range;               // universal only; empty otherwise
    std::uint64_t cardinality = 0;   // exact_cardinality only; 0 otherwise

    static RestrictionClause universal(std::string property, std::string range);
    static RestrictionClause exact(std::string property, std::uint64_t n);

    auto operator<=>(const RestrictionClause&) const = default;
};

/// A clause multiset: identical clauses contributed by different definitions
/// along an ancestor chain are counted with multiplicity.
using ClauseBag = std::map<RestrictionClause, std::size_t>;

std::size_t bag_cardinality(const ClauseBag& bag);
std::size_t bag_intersection_size(const ClauseBag& a, const ClauseBag& b);
std::size_t bag_union_size(const ClauseBag& a, const ClauseBag& b);

struct ConceptDef {
    std::string name;
    std::vector<std::string> parents;
    std::vector<std::string> equivalents;
    std::vector<RestrictionClause> own_clauses;
};

/// Immutable in-memory domain ontology. Declared equivalents are merged into
/// one logical node (symmetric-transitive closure); the parent graph over
/// those nodes must be acyclic. All queries are pure and thread-safe.
class Ontology {
public:
    /// An empty ontology; no concept is declared.
    Ontology() = default;

    /// Parses the JSON ontology document and validates it: duplicate names,
    /// dangling parent/equivalent references and parent cycles are rejected.
    static Ontology parse(std::string_view text);
    static Ontology from_concepts(std::vector<ConceptDef> concepts);

    std::string serialize() const;

    bool has_concept(std::string_view name) const;
    const ConceptDef& definition(std::string_view name) const;
    /// Declaration order.
    std::vector<std::string> concept_names() const;
    std::size_t size() const { return concepts_.size(); }

    /// True iff x and y are the same concept or connected through the
    /// symmetric-transitive closure of declared equivalents.
    bool are_same_node(std::string_view x, std::string_view y) const;

    /// True iff y is reachable from x via one or more parent edges,
    /// treating equivalent concepts as one node. Irreflexive.
    bool is_strict_subclass(std::string_view x, std::string_view y) const;

    /// True iff some declared concept is a strict ancestor of both x and y.
    /// The implicit top concept does not count. Callers deciding on concept
    /// similarity must branch on equality and subsumption first.
    bool has_common_ancestor(std::string_view x, std::string_view y) const;

    /// Multiset union of the concept's own clauses and the own clauses of
    /// every distinct ancestor. Each ancestor contributes exactly once, but
    /// identical clauses from different contributors stack.
    const ClauseBag& clause_bag(std::string_view x) const;

    /// Property count of the fully inherited definition, with multiplicity.
    std::size_t nbprop(std::string_view x) const;

private:
    void build_indices();
    std::size_t node_of(std::string_view name) const;  // throws UnknownConceptError

    std::vector<ConceptDef> concepts_;
    std::map<std::string, std::size_t, std::less<>> index_;  // name -> concepts_ idx
    std::vector<std::size_t> node_;                    // concept idx -> merged node id
    std::vector<std::vector<std::size_t>> ancestors_;  // node -> strict ancestor nodes, sorted
    std::vector<ClauseBag> bags_;                      // node -> inherited clause bag
};

}  // namespace wsd
