#pragma once

#include <stdexcept>
#include <string>

namespace currikit {

// Bad input data (malformed files, violated invariants). The CLI maps this
// to exit code 1; flag/usage problems are handled by the parser (exit 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace currikit
