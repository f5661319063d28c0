#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tris {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented domain invariant (negative radius, bad codebook, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidElement : public Error {
public:
    using Error::Error;
};

/// Amplifier control current above the per-unit supply budget.
class SupplyBudgetExceeded : public Error {
public:
    using Error::Error;
};

/// The coherent sum vanished, so P_t / P_r is unbounded.
class InfinitePathLoss : public Error {
public:
    using Error::Error;
};

class InvalidControlWord : public Error {
public:
    using Error::Error;
};

class SearchSpaceTooLarge : public Error {
public:
    using Error::Error;
};

/// Configuration problem; carries the 1-based source line when one is known (0 otherwise).
class ConfigError : public Error {
public:
    ConfigError(std::string source, std::size_t line, const std::string& message)
        : Error(format(source, line, message)), source_(std::move(source)), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& source, std::size_t line, const std::string& message) {
        std::string out = source.empty() ? std::string("<config>") : source;
        if (line > 0) out += ":" + std::to_string(line);
        return out + ": " + message;
    }

    std::string source_;
    std::size_t line_;
};

}  // namespace tris
