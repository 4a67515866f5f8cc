#pragma once

#include <stdexcept>
#include <string>

namespace wsd {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text: JSON syntax errors, schema violations, unknown
/// fields. The message carries the position or field path.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally valid input that breaks a domain invariant (cycle in the
/// parent graph, dangling reference, weight out of range, duplicate id).
struct ValidationError : Error {
    using Error::Error;
};

/// Query against a concept identifier that is not declared in the ontology.
struct UnknownConceptError : Error {
    explicit UnknownConceptError(const std::string& name)
        : Error("unknown concept '" + name + "'"), concept_name(name) {}
    std::string concept_name;
};

}  // namespace wsd
