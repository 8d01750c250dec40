#pragma once

#include <stdexcept>
#include <string>

namespace abow {

// Raised for anything a user can cause from the outside: malformed files,
// bad flag combinations, impossible parameter choices. The CLI maps it to
// exit code 2; everything else is treated as an internal error (exit 1).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace abow
