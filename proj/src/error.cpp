#include "diemap/error.hpp"

namespace diemap {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::MalformedStl: return "MalformedStl";
    case ErrorKind::EmptyMesh: return "EmptyMesh";
    case ErrorKind::InvalidMesh: return "InvalidMesh";
    case ErrorKind::ConfigOverlap: return "ConfigOverlap";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::RuleTableInvalid: return "RuleTableInvalid";
    case ErrorKind::MapMismatch: return "MapMismatch";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::MissingTheta: return "MissingTheta";
    case ErrorKind::UnwritableOutput: return "UnwritableOutput";
    case ErrorKind::MalformedPly: return "MalformedPly";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + std::string(to_string(kind)) + ": " + message)
    , kind_(kind)
    , module_(std::move(module))
{
}

} // namespace diemap
