#pragma once

#include <stdexcept>
#include <string>

namespace evoforge {

// Base class for every error the pipeline raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input, bad configuration, violated precondition. CLI exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

// Pool store (or corpus file) could not be read or written. CLI exit code 3.
struct StoreError : Error {
    StoreError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
    long line;
};

// One failed transport attempt. Internal to backends; the gateway retries these.
struct TransportError : Error {
    using Error::Error;
};

// A backend does not implement the requested operation. Never retried.
struct CapabilityError : Error {
    using Error::Error;
};

// Raised by the gateway once the retry budget is exhausted. CLI exit code 2.
struct BackendError : Error {
    BackendError(const std::string& msg, int attempts)
        : Error(msg + " (after " + std::to_string(attempts) + " attempts)"), attempts(attempts) {}
    int attempts;
};

// Task-fusion sampling could not fill both pair buckets within the attempt budget.
struct PartialPlanError : Error {
    PartialPlanError(int in_filled, int cross_filled, int target_each)
        : Error("fusion plan unfillable: in-domain " + std::to_string(in_filled) + "/" +
                std::to_string(target_each) + ", cross-domain " + std::to_string(cross_filled) +
                "/" + std::to_string(target_each)),
          in_filled(in_filled),
          cross_filled(cross_filled),
          target_each(target_each) {}
    int in_filled;
    int cross_filled;
    int target_each;
};

}  // namespace evoforge
