#pragma once

#include <stdexcept>
#include <string>

namespace dmnai {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (edge lists, seed files, reference traces, configs).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally well-formed input that violates a model constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace dmnai
