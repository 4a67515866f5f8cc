#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsdisc/ontology.hpp"
#include "wsdisc/profiles.hpp"

namespace wsd {

/// Multiset of length-3 grams over the case-folded, trimmed string.
using GramBag = std::map<std::array<char, 3>, std::size_t>;

GramBag qgram_bag(std::string_view s);
std::size_t gram_count(const GramBag& bag);

/// Dice-style overlap 2*|A meet B| / (|A| + |B|) with min-multiplicity
/// intersection. Two strings too short to form grams compare equal-or-not
/// after case folding.
double syntactic_sim(std::string_view a, std::string_view b);

/// The side a concept identifier sits on decides which generalization
/// direction counts as a full match.
enum class Role { input, output };

/// Evaluation trace of one concept pair, for the explain command.
struct ConceptSimDetail {
    double value = 0.0;
    int case_id = 0;  // 1..7, the first matching case below
    bool is_ratio = false;
    std::size_t numerator = 0;
    std::size_t denominator = 0;
};

/// Similarity of a request-side concept x against a service-side concept y.
/// First matching case wins:
///   1. same node or declared equivalent -> 1
///   2. input, x strict subclass of y    -> 1
///   3. input, y strict subclass of x    -> nbprop(x) / nbprop(y)
///   4. output, x strict subclass of y   -> nbprop(y) / nbprop(x)
///   5. output, y strict subclass of x   -> 1
///   6. common strict ancestor           -> |bag(x) meet bag(y)| / |bag(x) join bag(y)|
///   7. otherwise                        -> 0
/// Ratio cases with a zero denominator yield 1 (subclass with no properties
/// is an exact structural match); an empty union in case 6 yields 0.
ConceptSimDetail concept_sim_detail(const Ontology& ont, std::string_view request_concept,
                                    std::string_view service_concept, Role role);
double concept_sim(const Ontology& ont, std::string_view request_concept,
                   std::string_view service_concept, Role role);

/// Evaluation trace of one I/O set comparison, for the explain command.
struct SetSimDetail {
    std::vector<double> best;         // best match per request concept, request order
    std::vector<double> sorted_best;  // the same, descending
    long long m = 0;                  // |request side| - |service side|
    double value = 0.0;
};

/// Best-mapping aggregation for inputs: each request input keeps its best
/// concept match; a service requiring more inputs than the request names
/// (m < 0) divides the mean by |m|+1. Empty-set conventions: both empty -> 1,
/// request side empty -> 1/(|S|+1), service side empty -> 0.
SetSimDetail inputs_sim_detail(const Ontology& ont, std::span<const std::string> request_inputs,
                               std::span<const std::string> service_inputs);
double inputs_sim(const Ontology& ont, std::span<const std::string> request_inputs,
                  std::span<const std::string> service_inputs);

/// Same aggregation with the penalty on the other branch: a service yielding
/// fewer outputs than requested (m > 0) divides the mean by m+1. Empty-set
/// conventions mirror inputs_sim.
SetSimDetail outputs_sim_detail(const Ontology& ont,
                                std::span<const std::string> request_outputs,
                                std::span<const std::string> service_outputs);
double outputs_sim(const Ontology& ont, std::span<const std::string> request_outputs,
                   std::span<const std::string> service_outputs);

double semantic_sim(const Ontology& ont, const Request& request,
                    const ServiceProfile& profile);

struct SimilarityBreakdown {
    double nsim = 0.0;        // name similarity
    double tdsim = 0.0;       // textual description similarity
    double ntdsim = 0.0;      // (nsim + tdsim) / 2
    double isim = 0.0;        // inputs similarity
    double osim = 0.0;        // outputs similarity
    double iosim = 0.0;       // (isim + osim) / 2
    double functional = 0.0;  // w1 * ntdsim + w2 * iosim
};

SimilarityBreakdown functional_sim(const Ontology& ont, const Request& request,
                                   const ServiceProfile& profile);

}  // namespace wsd
