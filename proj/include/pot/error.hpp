#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bounds, dimensions, empty input).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A file could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : Error(format(source, line, column, what)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& source, std::size_t line, std::size_t column,
                              const std::string& what) {
        std::string out = source;
        if (line > 0) {
            out += ":" + std::to_string(line);
            if (column > 0) out += ":" + std::to_string(column);
        }
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// An iterative solver failed to converge or hit a degenerate state.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace pot
