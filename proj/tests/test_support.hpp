#pragma once

#include <filesystem>
#include <string>

#include "wsdisc/jsonio.hpp"
#include "wsdisc/ontology.hpp"
#include "wsdisc/profiles.hpp"

namespace testsup {

inline std::filesystem::path fixture(const std::string& rel) {
    return std::filesystem::path(WSDISC_FIXTURES_DIR) / rel;
}

inline std::string fixture_text(const std::string& rel) {
    return wsd::jsonio::read_file(fixture(rel));
}

inline wsd::Ontology fig6() {
    return wsd::Ontology::parse(fixture_text("fig6.ontology.json"));
}

inline wsd::Request req1() {
    return wsd::parse_request(fixture_text("req1.request.json"));
}

inline wsd::Request req2() {
    return wsd::parse_request(fixture_text("req2.request.json"));
}

inline wsd::ServiceProfile wser1() {
    return wsd::parse_profile(fixture_text("registry/wser1/profile.json"));
}

inline wsd::ServiceProfile wser2() {
    return wsd::parse_profile(fixture_text("registry/wser2/profile.json"));
}

}  // namespace testsup
