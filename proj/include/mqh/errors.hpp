#ifndef MQH_ERRORS_HPP
#define MQH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mqh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroAtom : Error {
    using Error::Error;
};
struct NotNormalized : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct MonotonicityViolation : Error {
    using Error::Error;
};
struct EmptyBatch : Error {
    using Error::Error;
};
struct DegenerateKernel : Error {
    using Error::Error;
};
struct InfeasibleInstance : Error {
    using Error::Error;
};

// Config parsing failures carry the offending field path for CLI diagnostics.
struct ConfigError : Error {
    std::string field;
    ConfigError(std::string field_path, const std::string& what)
        : Error("config error at '" + field_path + "': " + what), field(std::move(field_path)) {}
};

}  // namespace mqh

#endif  // MQH_ERRORS_HPP
