#pragma once

#include <stdexcept>
#include <string>

namespace uavrelay {

// Config file could not be read or parsed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scenario or option violates an invariant; the message names it.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An embedded solver failed in a way the caller cannot recover from.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem read/write failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uavrelay
