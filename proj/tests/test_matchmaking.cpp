#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wsdisc/matchmaking.hpp"
#include "wsdisc/rng.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace wsd;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("qgram bags slide a 3-character window over the folded string") {
    const GramBag bag = qgram_bag("FindAlgUniversity");
    CHECK(gram_count(bag) == 15);
    CHECK(bag.contains({'f', 'i', 'n'}));
    CHECK(bag.contains({'i', 'n', 'd'}));
    CHECK(bag.contains({'n', 'd', 'a'}));
    CHECK(bag.contains({'d', 'a', 'l'}));

    CHECK(qgram_bag("ab").empty());
    CHECK(qgram_bag("").empty());

    const GramBag rep = qgram_bag("aaaa");
    REQUIRE(rep.size() == 1);
    CHECK(rep.at({'a', 'a', 'a'}) == 2);
}

TEST_CASE("syntactic similarity reproduces the worked 26/35 value") {
    CHECK(syntactic_sim("FindAlgUniversity", "FindAlgerianUniversity") ==
          doctest::Approx(26.0 / 35.0).epsilon(kTol));
    CHECK(syntactic_sim("abc", "abc") == doctest::Approx(1.0));
    CHECK(syntactic_sim("abc", "xyz") == doctest::Approx(0.0));
}

TEST_CASE("syntactic similarity is symmetric, case-folded and bounded") {
    DetRng rng(11);
    const std::string alphabet = "abcxyz ";
    for (int i = 0; i < 200; ++i) {
        std::string a, b;
        const auto len_a = rng.uniform_int(0, 10);
        const auto len_b = rng.uniform_int(0, 10);
        for (int k = 0; k < len_a; ++k) a.push_back(alphabet[rng.uniform_int(0, 6)]);
        for (int k = 0; k < len_b; ++k) b.push_back(alphabet[rng.uniform_int(0, 6)]);
        const double ab = syntactic_sim(a, b);
        CHECK(ab == syntactic_sim(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        if (a.size() >= 3) {
            CHECK(syntactic_sim(a, a) == doctest::Approx(1.0));
        }
    }
    CHECK(syntactic_sim("ABC", "abc") == doctest::Approx(1.0));
    SUBCASE("short strings compare by folded equality") {
        CHECK(syntactic_sim("ab", "AB") == doctest::Approx(1.0));
        CHECK(syntactic_sim("ab", "cd") == doctest::Approx(0.0));
        CHECK(syntactic_sim("ab", "abc") == doctest::Approx(0.0));
    }
}

TEST_CASE("concept similarity reproduces every worked figure value") {
    const Ontology ont = testsup::fig6();
    CHECK(concept_sim(ont, "University", "University", Role::input) == doctest::Approx(1.0));
    CHECK(concept_sim(ont, "University", "University", Role::output) == doctest::Approx(1.0));
    CHECK(concept_sim(ont, "PhdStudent", "Person", Role::input) == doctest::Approx(1.0));
    CHECK(concept_sim(ont, "AlgUniversity", "University", Role::output) ==
          doctest::Approx(0.80).epsilon(kTol));
    CHECK(concept_sim(ont, "University", "AlgUniversity", Role::output) ==
          doctest::Approx(1.0));
    CHECK(concept_sim(ont, "Person", "PhdStudent", Role::input) ==
          doctest::Approx(0.60).epsilon(kTol));
    CHECK(concept_sim(ont, "PhdStudent", "Employer", Role::input) ==
          doctest::Approx(0.50).epsilon(kTol));
    CHECK(concept_sim(ont, "PhdStudent", "Employer", Role::output) ==
          doctest::Approx(0.50).epsilon(kTol));
    CHECK(concept_sim(ont, "Person", "University", Role::input) == doctest::Approx(0.0));
    CHECK(concept_sim(ont, "GeographicArea", "Location", Role::input) ==
          doctest::Approx(0.40).epsilon(kTol));
}

TEST_CASE("concept similarity detail reports the case and ratio taken") {
    const Ontology ont = testsup::fig6();
    const ConceptSimDetail d =
        concept_sim_detail(ont, "AlgUniversity", "University", Role::output);
    CHECK(d.case_id == 4);
    CHECK(d.is_ratio);
    CHECK(d.numerator == 8);
    CHECK(d.denominator == 10);

    const ConceptSimDetail sib =
        concept_sim_detail(ont, "PhdStudent", "Employer", Role::input);
    CHECK(sib.case_id == 6);
    CHECK(sib.numerator == 6);
    CHECK(sib.denominator == 12);
}

TEST_CASE("degenerate ratios fall back per the documented rules") {
    // B below A, both clause-free: ratio cases see 0/0 and yield 1;
    // clause-free siblings meet at case 6 with an empty union and yield 0.
    const Ontology ont = Ontology::parse(R"({"concepts": [
        {"name":"A","parents":[],"equivalents":[],"clauses":[]},
        {"name":"B","parents":["A"],"equivalents":[],"clauses":[]},
        {"name":"C","parents":["A"],"equivalents":[],"clauses":[]}]})");
    CHECK(concept_sim(ont, "A", "B", Role::input) == doctest::Approx(1.0));
    CHECK(concept_sim(ont, "B", "A", Role::output) == doctest::Approx(1.0));
    CHECK(concept_sim(ont, "B", "C", Role::input) == doctest::Approx(0.0));
}

TEST_CASE("role asymmetry allows generalization in one direction only") {
    const Ontology ont = testsup::fig6();
    const auto names = ont.concept_names();
    for (const auto& x : names) {
        for (const auto& y : names) {
            CHECK(concept_sim(ont, x, x, Role::input) == doctest::Approx(1.0));
            CHECK(concept_sim(ont, x, x, Role::output) == doctest::Approx(1.0));
            if (ont.is_strict_subclass(x, y)) {
                CHECK(concept_sim(ont, x, y, Role::input) == doctest::Approx(1.0));
                CHECK(concept_sim(ont, y, x, Role::output) == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("inputs aggregation reproduces the worked values") {
    const Ontology ont = testsup::fig6();
    const std::vector<std::string> req1_in{"PhdStudent"};
    const std::vector<std::string> wser1_in{"Person"};
    CHECK(inputs_sim(ont, req1_in, wser1_in) == doctest::Approx(1.0));

    const std::vector<std::string> req2_in{"GeographicArea", "Person"};
    const std::vector<std::string> wser2_in{"Location", "PhdStudent"};
    CHECK(inputs_sim(ont, req2_in, wser2_in) == doctest::Approx(0.5).epsilon(kTol));

    // Fewer request inputs than the service requires: penalty divisor 2.
    const std::vector<std::string> more{"Person", "Location"};
    CHECK(inputs_sim(ont, req1_in, more) == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("outputs aggregation reproduces the worked values") {
    const Ontology ont = testsup::fig6();
    const std::vector<std::string> req1_out{"Location", "AlgUniversity"};
    const std::vector<std::string> wser1_out{"Location", "University"};
    CHECK(outputs_sim(ont, req1_out, wser1_out) == doctest::Approx(0.9).epsilon(kTol));

    const std::vector<std::string> req2_out{"University"};
    const std::vector<std::string> wser2_out{"AlgUniversity"};
    CHECK(outputs_sim(ont, req2_out, wser2_out) == doctest::Approx(1.0));

    const std::vector<std::string> only_location{"Location"};
    CHECK(outputs_sim(ont, req1_out, only_location) == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("empty I/O sets follow the documented conventions") {
    const Ontology ont = testsup::fig6();
    const std::vector<std::string> none{};
    const std::vector<std::string> two{"Person", "Location"};
    CHECK(inputs_sim(ont, none, none) == doctest::Approx(1.0));
    CHECK(inputs_sim(ont, none, two) == doctest::Approx(1.0 / 3.0).epsilon(kTol));
    CHECK(inputs_sim(ont, two, none) == doctest::Approx(0.0));
    CHECK(outputs_sim(ont, none, none) == doctest::Approx(1.0));
    CHECK(outputs_sim(ont, none, two) == doctest::Approx(1.0 / 3.0).epsilon(kTol));
    CHECK(outputs_sim(ont, two, none) == doctest::Approx(0.0));
}

TEST_CASE("aggregation ignores the order of either set") {
    const Ontology ont = testsup::fig6();
    const std::vector<std::string> a{"GeographicArea", "Person"};
    const std::vector<std::string> a_rev{"Person", "GeographicArea"};
    const std::vector<std::string> b{"Location", "PhdStudent"};
    const std::vector<std::string> b_rev{"PhdStudent", "Location"};
    CHECK(inputs_sim(ont, a, b) == inputs_sim(ont, a_rev, b));
    CHECK(inputs_sim(ont, a, b) == inputs_sim(ont, a, b_rev));
    CHECK(outputs_sim(ont, a, b) == outputs_sim(ont, a_rev, b_rev));
}

TEST_CASE("an extra unmatched service input never raises inputs similarity") {
    const Ontology ont = testsup::fig6();
    DetRng rng(77);
    const auto names = ont.concept_names();
    for (int i = 0; i < 100; ++i) {
        auto request = oracle::random_concept_set(rng, names);
        auto service = oracle::random_concept_set(rng, names);
        if (request.empty() || service.empty()) {
            continue;
        }
        const double before = inputs_sim(ont, request, service);
        // "Institution" is clause-free and unrelated to most concepts; as an
        // extra required input it adds no new best match for these requests.
        std::vector<std::string> harder = service;
        if (std::find(harder.begin(), harder.end(), "Institution") != harder.end()) {
            continue;
        }
        bool related = false;
        for (const auto& r : request) {
            if (concept_sim(ont, r, "Institution", Role::input) > 0.0) {
                related = true;
            }
        }
        if (related) {
            continue;
        }
        harder.push_back("Institution");
        CHECK(inputs_sim(ont, request, harder) <= before + kTol);
    }
}

TEST_CASE("semantic similarity averages the two aggregations") {
    const Ontology ont = testsup::fig6();
    const Request r1 = testsup::req1();
    const ServiceProfile w1 = testsup::wser1();
    CHECK(semantic_sim(ont, r1, w1) == doctest::Approx(0.95).epsilon(kTol));

    Request identical;
    identical.inputs = w1.inputs;
    identical.outputs = w1.outputs;
    CHECK(semantic_sim(ont, identical, w1) == doctest::Approx(1.0));

    Request unrelated;
    unrelated.inputs = {"GeographicArea"};
    unrelated.outputs = {"Location"};
    ServiceProfile other = w1;
    other.inputs = {"Employer"};
    other.outputs = {"PhdStudent"};
    CHECK(semantic_sim(ont, unrelated, other) == doctest::Approx(0.0));
}

TEST_CASE("functional similarity composes the weighted layers") {
    const Ontology ont = testsup::fig6();
    const ServiceProfile w1 = testsup::wser1();

    Request self;
    self.name = w1.name;
    self.description = w1.description;
    self.inputs = w1.inputs;
    self.outputs = w1.outputs;
    for (double weight : {0.0, 0.25, 0.5, 1.0}) {
        self.w1 = weight;
        self.w2 = 1.0 - weight;
        CHECK(functional_sim(ont, self, w1).functional == doctest::Approx(1.0));
    }

    Request r1 = testsup::req1();
    r1.w1 = 0.0;
    r1.w2 = 1.0;
    const SimilarityBreakdown b = functional_sim(ont, r1, w1);
    CHECK(b.functional == doctest::Approx(b.iosim));
    CHECK(b.functional == doctest::Approx(0.95).epsilon(kTol));
    CHECK(b.ntdsim == doctest::Approx((b.nsim + b.tdsim) / 2.0));
    CHECK(b.iosim == doctest::Approx((b.isim + b.osim) / 2.0));
    CHECK(b.nsim == doctest::Approx(26.0 / 35.0).epsilon(kTol));
}

TEST_CASE("aggregations agree with the brute-force path on random instances") {
    DetRng rng(4031);
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 60; ++trial) {
        const auto defs = oracle::random_concepts(rng);
        Ontology ont = Ontology::parse(R"({"concepts": []})");
        try {
            ont = Ontology::from_concepts(defs);
        } catch (const ValidationError&) {
            continue;
        }
        ++checked;
        const oracle::FlatOntology flat(defs);
        const auto names = ont.concept_names();
        for (int k = 0; k < 8; ++k) {
            const auto request = oracle::random_concept_set(rng, names);
            const auto service = oracle::random_concept_set(rng, names);
            CHECK(inputs_sim(ont, request, service) ==
                  doctest::Approx(flat.set_sim(request, service, true)).epsilon(1e-12));
            CHECK(outputs_sim(ont, request, service) ==
                  doctest::Approx(flat.set_sim(request, service, false)).epsilon(1e-12));
        }
    }
    CHECK(checked >= 50);
}
