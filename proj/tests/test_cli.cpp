#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string command =
        std::string(WSDISC_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.out.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string fx(const std::string& rel) { return testsup::fixture(rel).string(); }

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) {
        path = fs::temp_directory_path() / name;
        fs::remove(path);
    }
    ~TempFile() { fs::remove(path); }
};

}  // namespace

TEST_CASE("validate accepts the shipped fixtures and reports unknown concepts") {
    const RunResult ok = run_cli("validate " + fx("fig6.ontology.json") + " --request " +
                                 fx("req1.request.json") + " --profile " +
                                 fx("registry/wser1/profile.json"));
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out).empty());

    TempFile bad("wsdisc_cli_bad_request.json");
    std::ofstream(bad.path) << R"({"name":"r","description":"d","inputs":["Dragon"],
        "outputs":[],"weights":{},"constraints":[]})";
    const RunResult violation = run_cli("validate " + fx("fig6.ontology.json") +
                                        " --request " + bad.path.string());
    CHECK(violation.exit_code == 1);
    const json parsed = json::parse(violation.out);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0]["message"].get<std::string>().find("Dragon") != std::string::npos);

    CHECK(run_cli("validate /nonexistent/ontology.json").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("match prints the full breakdown and checks weight flags") {
    const RunResult r = run_cli("match --ontology " + fx("fig6.ontology.json") +
                                " --request " + fx("req1.request.json") + " --profile " +
                                fx("registry/wser1/profile.json") + " --w1 0 --w2 1");
    CHECK(r.exit_code == 0);
    const json b = json::parse(r.out);
    CHECK(b["iosim"].get<double>() == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(b["functional"].get<double>() == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(b["nsim"].get<double>() == doctest::Approx(26.0 / 35.0).epsilon(1e-8));
    CHECK(b.contains("tdsim"));
    CHECK(b.contains("ntdsim"));
    CHECK(b.contains("isim"));
    CHECK(b.contains("osim"));

    CHECK(run_cli("match --ontology " + fx("fig6.ontology.json") + " --request " +
                  fx("req1.request.json") + " --profile " +
                  fx("registry/wser1/profile.json") + " --w1 0.7 --w2 0.7")
              .exit_code == 2);
}

TEST_CASE("a profile matched against its own mirror scores a functional 1") {
    TempFile mirror("wsdisc_cli_mirror_request.json");
    std::ofstream(mirror.path) << R"({"name":"FindAlgerianUniversity",
        "description":"Finds an Algerian university for a person near a given location",
        "inputs":["Person"],"outputs":["Location","University"],
        "weights":{},"constraints":[]})";
    const RunResult r = run_cli("match --ontology " + fx("fig6.ontology.json") +
                                " --request " + mirror.path.string() + " --profile " +
                                fx("registry/wser1/profile.json"));
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out)["functional"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("discover ranks the registry and applies the price constraint") {
    const RunResult r = run_cli("discover --ontology " + fx("fig6.ontology.json") +
                                " --registry " + fx("registry") + " --request " +
                                fx("req1.request.json"));
    CHECK(r.exit_code == 0);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 1);  // wser2 breaks the 100-unit price cap
    CHECK(rows[0]["service"] == "wser1");
    CHECK(rows[0]["overall"].get<double>() ==
          doctest::Approx(rows[0]["functional"].get<double>() +
                          rows[0]["qos"].get<double>() +
                          rows[0]["reputation"].get<double>()));

    const RunResult empty = run_cli(
        "discover --ontology " + fx("fig6.ontology.json") + " --registry " +
        fx("registry") + " --request " + fx("req1.request.json") + " --threshold 1.01");
    CHECK(empty.exit_code == 0);
    CHECK(json::parse(empty.out).empty());
}

TEST_CASE("qos scopes agree on a single-provider registry") {
    TempFile dir_guard("unused");
    const fs::path registry = fs::temp_directory_path() / "wsdisc_cli_registry";
    fs::remove_all(registry);
    for (const auto& [id, price] : {std::pair{"svc1", 40}, std::pair{"svc2", 90}}) {
        fs::create_directories(registry / id);
        std::ofstream(registry / id / "profile.json")
            << R"({"id":")" << id << R"(","name":"FindAlgUniversity",
                "description":"d","inputs":["PhdStudent"],
                "outputs":["Location","AlgUniversity"],"provider":"solo","qos":[
                {"name":"ExecutionPrice","value":)"
            << price
            << R"(,"unit":"unit","monotony":"decrease","kind":"static"}]})";
    }
    const std::string base = "discover --ontology " + fx("fig6.ontology.json") +
                             " --registry " + registry.string() + " --request " +
                             fx("req1.request.json");
    const RunResult consumer_scope = run_cli(base + " --qos-scope consumer");
    const RunResult provider_scope = run_cli(base + " --qos-scope provider");
    CHECK(consumer_scope.exit_code == 0);
    CHECK(consumer_scope.out == provider_scope.out);
    fs::remove_all(registry);
}

TEST_CASE("rate appends, replaces, and rejects out-of-range scores") {
    TempFile ratings("wsdisc_cli_ratings.jsonl");
    const std::string base = "rate --ratings " + ratings.path.string() +
                             " --consumer C1 --request R1 --service S1 --provider P1";
    CHECK(run_cli(base + " --score ResponseTime=4 --score ExecutionPrice=2").exit_code == 0);
    {
        std::ifstream in(ratings.path);
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) {
            if (!line.empty()) ++lines;
        }
        CHECK(lines == 1);
    }
    CHECK(run_cli(base + " --score ResponseTime=1").exit_code == 0);
    {
        const std::string text = wsd::jsonio::read_file(ratings.path);
        CHECK(text.find("\"ResponseTime\":1") != std::string::npos);
        int lines = 0;
        for (const char c : text) {
            if (c == '\n') ++lines;
        }
        CHECK(lines == 1);  // replaced, not appended
    }
    CHECK(run_cli(base + " --score ResponseTime=9").exit_code == 1);
    CHECK(run_cli(base + " --score ResponseTime=x").exit_code == 2);
}

TEST_CASE("discover folds measurements and ratings into the ranking") {
    // A response-time cap that the advertised value of wser1 (600 ms) would
    // break; recorded measurements with mean 150 ms keep it in.
    TempFile request("wsdisc_cli_rt_request.json");
    std::ofstream(request.path) << R"({"name":"FindAlgUniversity",
        "description":"d","inputs":["PhdStudent"],
        "outputs":["Location","AlgUniversity"],
        "weights":{"ResponseTime":2,"Reliability":3},
        "constraints":[{"name":"ResponseTime","threshold":300}],"threshold":0.4})";
    const std::string base = "discover --ontology " + fx("fig6.ontology.json") +
                             " --registry " + fx("registry") + " --request " +
                             request.path.string();
    const RunResult advertised = run_cli(base);
    CHECK(advertised.exit_code == 0);
    for (const auto& row : json::parse(advertised.out)) {
        CHECK(row["service"] != "wser1");
    }

    TempFile measurements("wsdisc_cli_measurements.jsonl");
    std::ofstream(measurements.path)
        << R"({"service":"wser1","name":"ResponseTime","value":100})" << "\n"
        << R"({"service":"wser1","name":"ResponseTime","value":200})" << "\n";
    const RunResult measured = run_cli(base + " --measurements " + measurements.path.string());
    CHECK(measured.exit_code == 0);
    bool wser1_back = false;
    for (const auto& row : json::parse(measured.out)) {
        wser1_back = wser1_back || row["service"] == "wser1";
    }
    CHECK(wser1_back);

    // Ratings feed the reputation column: wser2 rated high on ResponseTime,
    // wser1 unrated (raw 0). Reliability is unrated for both, so its rate
    // degenerates to 1 and the weighted means follow.
    TempFile ratings("wsdisc_cli_discover_ratings.jsonl");
    std::ofstream(ratings.path)
        << R"({"consumer":"C1","request":"R1","provider":"provider-b","service":"wser2","scores":{"ResponseTime":5},"timestamp":1})"
        << "\n";
    TempFile req2_like("wsdisc_cli_req2.json");
    std::ofstream(req2_like.path) << R"({"name":"FindUniversity",
        "description":"d","inputs":["GeographicArea","Person"],"outputs":["University"],
        "weights":{"ResponseTime":2,"Reliability":3},"constraints":[],"threshold":0.3})";
    const RunResult rated = run_cli("discover --ontology " + fx("fig6.ontology.json") +
                                    " --registry " + fx("registry") + " --request " +
                                    req2_like.path.string() + " --ratings " +
                                    ratings.path.string());
    CHECK(rated.exit_code == 0);
    const json rows = json::parse(rated.out);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        if (row["service"] == "wser2") {
            CHECK(row["reputation"].get<double>() == doctest::Approx(1.0));
        } else {
            CHECK(row["reputation"].get<double>() == doctest::Approx(0.6));
        }
    }
}

TEST_CASE("match reports unknown concepts as a validation failure") {
    TempFile bad("wsdisc_cli_unknown_concept.json");
    std::ofstream(bad.path) << R"({"name":"r","description":"d","inputs":["Wyvern"],
        "outputs":[],"weights":{},"constraints":[]})";
    CHECK(run_cli("match --ontology " + fx("fig6.ontology.json") + " --request " +
                  bad.path.string() + " --profile " + fx("registry/wser1/profile.json"))
              .exit_code == 1);
}

TEST_CASE("simulate writes byte-identical reports for the same seed") {
    TempFile out_a("wsdisc_cli_report_a.json");
    TempFile out_b("wsdisc_cli_report_b.json");
    const std::string base =
        "simulate --config " + fx("simulation/paper.config.json") + " --out ";
    CHECK(run_cli(base + out_a.path.string()).exit_code == 0);
    CHECK(run_cli(base + out_b.path.string() + " --parallel").exit_code == 0);
    const std::string a = wsd::jsonio::read_file(out_a.path);
    const std::string b = wsd::jsonio::read_file(out_b.path);
    CHECK(a == b);
    const json report = json::parse(a);
    CHECK(report["services"].size() == 20);
    CHECK(report["rounds"].size() == 100);
}

TEST_CASE("explain shows the ratio case behind the 0.80 concept pair") {
    const RunResult r = run_cli("explain --ontology " + fx("fig6.ontology.json") +
                                " --request " + fx("req1.request.json") + " --profile " +
                                fx("registry/wser1/profile.json"));
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    bool found = false;
    for (const auto& pair : j["outputs"]["pairs"]) {
        if (pair["request"] == "AlgUniversity" && pair["service"] == "University") {
            found = true;
            CHECK(pair["case"] == 4);
            CHECK(pair["numerator"] == 8);
            CHECK(pair["denominator"] == 10);
            CHECK(pair["value"].get<double>() == doctest::Approx(0.8));
        }
    }
    CHECK(found);
    CHECK(j["name"]["common"] == 13);

    const RunResult registry_mode = run_cli(
        "explain --ontology " + fx("fig6.ontology.json") + " --request " +
        fx("req1.request.json") + " --registry " + fx("registry"));
    CHECK(registry_mode.exit_code == 0);
    const json full = json::parse(registry_mode.out);
    CHECK(full["services"].size() == 2);
    CHECK(full["rows"].size() == 1);
    CHECK(full["attributes"].size() == 2);  // the two positively weighted attrs

    CHECK(run_cli("explain --ontology " + fx("fig6.ontology.json") + " --request " +
                  fx("req1.request.json"))
              .exit_code == 2);
}
