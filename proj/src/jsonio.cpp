#include "wsdisc/jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wsd::jsonio {

json parse_text(std::string_view text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error("short write: " + path.string());
    }
}

void expect_object(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& path) {
    if (!j.is_object()) {
        throw ParseError(path + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ParseError(path + ": unknown field '" + key + "'");
        }
    }
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(path + ": missing field '" + std::string(key) + "'");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_string()) {
        throw ParseError(path + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

double require_finite_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_number()) {
        throw ParseError(path + "." + key + ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ParseError(path + "." + key + ": value must be finite");
    }
    return d;
}

long long require_integer(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_number_integer()) {
        throw ParseError(path + "." + key + ": expected an integer");
    }
    return v.get<long long>();
}

std::string optional_string(const json& obj, const char* key, const std::string& path,
                            const std::string& fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw ParseError(path + "." + key + ": expected a string");
    }
    return it->get<std::string>();
}

json sig9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return json::parse(buf);
}

}  // namespace wsd::jsonio
