#pragma once

#include <stdexcept>
#include <string>

namespace resound {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, unknown name, bad file contents.
struct InputError : Error {
    using Error::Error;
};

/// An operation was called on a net outside its domain (e.g. reset arcs
/// given to an algorithm that is only correct for plain nets).
struct PreconditionError : Error {
    using Error::Error;
};

/// A configured state/size/time budget ran out.
struct BudgetExceeded : Error {
    using Error::Error;
};

/// An internally produced run or certificate failed its own replay check.
struct ConsistencyError : Error {
    using Error::Error;
};

} // namespace resound
