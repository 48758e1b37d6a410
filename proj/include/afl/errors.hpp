#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace afl {

// Argument/precondition violations use std::invalid_argument directly.

/// Operation is defined only for a parameter regime not met by the input
/// (e.g. non-integer 2*n*c1 for displacement indexing).
class UnsupportedRegime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllConditioned : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Self-inconsistent configuration detected at run time (e.g. two grid
/// paths sharing a displacement diagonal).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyChannel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, std::size_t required_fft_len)
        : std::runtime_error(what), required_fft_len_(required_fft_len) {}

    /// Smallest FFT length whose bin is fine enough for the requested shift.
    std::size_t required_fft_len() const noexcept { return required_fft_len_; }

private:
    std::size_t required_fft_len_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace afl
