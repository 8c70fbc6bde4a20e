#pragma once

#include <stdexcept>
#include <string>

namespace santalo {

/// Category of a failure. Domain errors are violated preconditions on valid
/// input; parse errors come from malformed JSON or files.
enum class ErrorKind { Domain, Parse };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

inline void require(bool ok, const char* message)
{
    if (!ok) throw DomainError(message);
}

inline void require(bool ok, const std::string& message)
{
    if (!ok) throw DomainError(message);
}

}  // namespace santalo
