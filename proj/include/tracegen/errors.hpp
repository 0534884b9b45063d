#ifndef TRACEGEN_ERRORS_HPP
#define TRACEGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tracegen {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments, malformed input files, violated preconditions.
struct InputError : Error {
    using Error::Error;
};

// Operation incompatible with the current state of a stateful object,
// e.g. feeding a synchronization state that already terminated.
struct StateError : Error {
    using Error::Error;
};

// A configured work budget was exceeded.
struct ResourceError : Error {
    using Error::Error;
};

// Conditions the theory excludes; reaching one is a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace tracegen

#endif
