#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fridgr {

// Numeric values are mirrored by fridgr_status in fridgr.h; keep them in sync.
enum class Errc : int {
    InvalidArgument = 1,
    InvalidConfig = 2,
    PlacementExhausted = 3,
    TemplateSyntax = 4,
    DuplicateTemplateId = 5,
    UnsatisfiableMask = 6,
    OutOfGrammar = 7,
    UnknownToken = 8,
    InconsistentFilters = 9,
    EmptyQuery = 10,
    QueueFull = 11,
    UnknownRequestId = 12,
    Schema = 13,
    MissingScene = 14,
    Io = 15,
    SoundnessViolation = 16,
    ServiceStopped = 17,
    Internal = 99,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class TemplateSyntaxError : public Error {
public:
    TemplateSyntaxError(std::size_t line, const std::string& reason)
        : Error(Errc::TemplateSyntax, "line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Raised by the question parser. The kind is one of OutOfGrammar, UnknownToken,
/// InconsistentFilters or EmptyQuery; token() carries the offending token when known.
class ParseError : public Error {
public:
    ParseError(Errc kind, const std::string& what, std::string token = {})
        : Error(kind, what), token_(std::move(token)) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

}  // namespace fridgr
