#pragma once

#include <stdexcept>
#include <string>

namespace odum {

// Failure categories; the C API and the CLI exit codes map 1:1 onto these.
enum class ErrorKind {
    io,
    parse,
    invalid,
    network,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_io(std::string msg) { throw Error(ErrorKind::io, std::move(msg)); }
[[noreturn]] inline void throw_parse(std::string msg) { throw Error(ErrorKind::parse, std::move(msg)); }
[[noreturn]] inline void throw_invalid(std::string msg) { throw Error(ErrorKind::invalid, std::move(msg)); }
[[noreturn]] inline void throw_network(std::string msg) { throw Error(ErrorKind::network, std::move(msg)); }

} // namespace odum
