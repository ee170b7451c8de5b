#include "splatseg/errors.hpp"

namespace splatseg {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kData: return "data";
    case ErrorKind::kInput: return "input";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kLookup: return "lookup";
    }
    return "unknown";
}

} // namespace splatseg
