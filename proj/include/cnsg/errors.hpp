#pragma once

#include <stdexcept>
#include <string>

namespace cnsg {

// Malformed text input. Line and column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        if (line <= 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    int line_;
    int column_;
};

// Well-formed input that violates a structural requirement (bad gluing, unknown class id, ...).
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A move whose location data does not match the encoding it is applied to.
class MoveNotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cnsg
