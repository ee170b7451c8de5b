#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splatseg {

enum class ErrorKind {
    kFormat,   // malformed file or missing property
    kData,     // well-formed file carrying invalid values
    kInput,    // caller-supplied argument out of contract
    kContract, // operation invoked on the wrong kind of object
    kIo,       // filesystem failure
    kLookup,   // requested entity does not exist
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct FormatError : Error {
    explicit FormatError(const std::string& m) : Error(ErrorKind::kFormat, m) {}
};
struct DataError : Error {
    explicit DataError(const std::string& m) : Error(ErrorKind::kData, m) {}
};
struct InputError : Error {
    explicit InputError(const std::string& m) : Error(ErrorKind::kInput, m) {}
};
struct ContractError : Error {
    explicit ContractError(const std::string& m) : Error(ErrorKind::kContract, m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};
struct LookupError : Error {
    explicit LookupError(const std::string& m) : Error(ErrorKind::kLookup, m) {}
};

} // namespace splatseg
