#include "wsdisc/matchmaking.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace wsd {

namespace {

std::string fold(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
    }
    return out;
}

}  // namespace

GramBag qgram_bag(std::string_view s) {
    const std::string folded = fold(s);
    GramBag bag;
    if (folded.size() < 3) {
        return bag;
    }
    for (std::size_t i = 0; i + 3 <= folded.size(); ++i) {
        ++bag[{folded[i], folded[i + 1], folded[i + 2]}];
    }
    return bag;
}

std::size_t gram_count(const GramBag& bag) {
    std::size_t n = 0;
    for (const auto& [gram, count] : bag) {
        n += count;
    }
    return n;
}

double syntactic_sim(std::string_view a, std::string_view b) {
    const GramBag ba = qgram_bag(a);
    const GramBag bb = qgram_bag(b);
    const std::size_t na = gram_count(ba);
    const std::size_t nb = gram_count(bb);
    if (na + nb == 0) {
        return fold(a) == fold(b) ? 1.0 : 0.0;
    }
    std::size_t common = 0;
    for (const auto& [gram, count] : ba) {
        auto it = bb.find(gram);
        if (it != bb.end()) {
            common += std::min(count, it->second);
        }
    }
    return 2.0 * static_cast<double>(common) / static_cast<double>(na + nb);
}

ConceptSimDetail concept_sim_detail(const Ontology& ont, std::string_view x,
                                    std::string_view y, Role role) {
    ConceptSimDetail d;
    if (ont.are_same_node(x, y)) {
        d.case_id = 1;
        d.value = 1.0;
        return d;
    }
    const bool x_below_y = ont.is_strict_subclass(x, y);
    const bool y_below_x = ont.is_strict_subclass(y, x);
    auto ratio = [&](std::size_t num, std::size_t den, int case_id) {
        d.case_id = case_id;
        d.is_ratio = true;
        d.numerator = num;
        d.denominator = den;
        d.value = den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
        return d;
    };
    if (role == Role::input) {
        if (x_below_y) {
            d.case_id = 2;
            d.value = 1.0;
            return d;
        }
        if (y_below_x) {
            return ratio(ont.nbprop(x), ont.nbprop(y), 3);
        }
    } else {
        if (x_below_y) {
            return ratio(ont.nbprop(y), ont.nbprop(x), 4);
        }
        if (y_below_x) {
            d.case_id = 5;
            d.value = 1.0;
            return d;
        }
    }
    if (ont.has_common_ancestor(x, y)) {
        const ClauseBag& bx = ont.clause_bag(x);
        const ClauseBag& by = ont.clause_bag(y);
        const std::size_t num = bag_intersection_size(bx, by);
        const std::size_t den = bag_union_size(bx, by);
        d.case_id = 6;
        d.is_ratio = true;
        d.numerator = num;
        d.denominator = den;
        d.value = den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
        return d;
    }
    d.case_id = 7;
    d.value = 0.0;
    return d;
}

double concept_sim(const Ontology& ont, std::string_view x, std::string_view y, Role role) {
    return concept_sim_detail(ont, x, y, role).value;
}

namespace {

/// Shared body of the two aggregations; `penalize_when_request_larger`
/// selects which sign of m carries the divisor.
SetSimDetail aggregate(const Ontology& ont, std::span<const std::string> request_side,
                       std::span<const std::string> service_side, Role role,
                       bool penalize_when_request_larger) {
    SetSimDetail d;
    d.m = static_cast<long long>(request_side.size()) -
          static_cast<long long>(service_side.size());
    if (request_side.empty() && service_side.empty()) {
        d.value = 1.0;
        return d;
    }
    if (request_side.empty()) {
        d.value = 1.0 / static_cast<double>(service_side.size() + 1);
        return d;
    }
    if (service_side.empty()) {
        d.value = 0.0;
        return d;
    }
    for (const auto& r : request_side) {
        double best = 0.0;
        for (const auto& s : service_side) {
            best = std::max(best, concept_sim(ont, r, s, role));
        }
        d.best.push_back(best);
    }
    d.sorted_best = d.best;
    std::sort(d.sorted_best.begin(), d.sorted_best.end(), std::greater<>());

    const bool penalized = penalize_when_request_larger ? d.m > 0 : d.m < 0;
    if (penalized) {
        const std::size_t take =
            penalize_when_request_larger ? service_side.size() : request_side.size();
        const double mean =
            std::accumulate(d.sorted_best.begin(),
                            d.sorted_best.begin() + static_cast<long>(take), 0.0) /
            static_cast<double>(take);
        d.value = mean / static_cast<double>(std::llabs(d.m) + 1);
    } else {
        const std::size_t take =
            penalize_when_request_larger ? request_side.size() : service_side.size();
        const double mean =
            std::accumulate(d.sorted_best.begin(),
                            d.sorted_best.begin() + static_cast<long>(take), 0.0) /
            static_cast<double>(take);
        d.value = mean;
    }
    return d;
}

}  // namespace

SetSimDetail inputs_sim_detail(const Ontology& ont, std::span<const std::string> r,
                               std::span<const std::string> s) {
    return aggregate(ont, r, s, Role::input, /*penalize_when_request_larger=*/false);
}

double inputs_sim(const Ontology& ont, std::span<const std::string> r,
                  std::span<const std::string> s) {
    return inputs_sim_detail(ont, r, s).value;
}

SetSimDetail outputs_sim_detail(const Ontology& ont, std::span<const std::string> r,
                                std::span<const std::string> s) {
    return aggregate(ont, r, s, Role::output, /*penalize_when_request_larger=*/true);
}

double outputs_sim(const Ontology& ont, std::span<const std::string> r,
                   std::span<const std::string> s) {
    return outputs_sim_detail(ont, r, s).value;
}

double semantic_sim(const Ontology& ont, const Request& request,
                    const ServiceProfile& profile) {
    return (inputs_sim(ont, request.inputs, profile.inputs) +
            outputs_sim(ont, request.outputs, profile.outputs)) /
           2.0;
}

SimilarityBreakdown functional_sim(const Ontology& ont, const Request& request,
                                   const ServiceProfile& profile) {
    SimilarityBreakdown b;
    b.nsim = syntactic_sim(request.name, profile.name);
    b.tdsim = syntactic_sim(request.description, profile.description);
    b.ntdsim = (b.nsim + b.tdsim) / 2.0;
    b.isim = inputs_sim(ont, request.inputs, profile.inputs);
    b.osim = outputs_sim(ont, request.outputs, profile.outputs);
    b.iosim = (b.isim + b.osim) / 2.0;
    b.functional = request.w1 * b.ntdsim + request.w2 * b.iosim;
    return b;
}

}  // namespace wsd
