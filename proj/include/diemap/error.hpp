#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diemap {

enum class ErrorKind {
    UnreadableFile,
    MalformedStl,
    EmptyMesh,
    InvalidMesh,
    ConfigOverlap,
    InvalidConfig,
    RuleTableInvalid,
    MapMismatch,
    UnknownKind,
    MissingTheta,
    UnwritableOutput,
    MalformedPly,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. Carries the error kind and the
/// module that raised it so the CLI can report provenance.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

} // namespace diemap
