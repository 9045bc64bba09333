#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>

namespace fdrlab {

/// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain.
class validation_error : public error {
public:
    validation_error(const std::string& field, const std::string& what)
        : error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A series is too short for the requested window.
class insufficient_data_error : public error {
public:
    insufficient_data_error(std::size_t required, std::size_t actual, const std::string& context)
        : error(context + ": need at least " + std::to_string(required) + " samples, have " +
                std::to_string(actual)),
          required_(required),
          actual_(actual) {}

    std::size_t required() const noexcept { return required_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t required_;
    std::size_t actual_;
};

class bounds_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Declared and actual content disagree (e.g. trace count header).
class integrity_error : public error {
public:
    using error::error;
};

class version_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace fdrlab

namespace fdrlab {

/// A table cell failed; `cause()` holds the original exception.
class cell_error : public error {
public:
    cell_error(std::size_t ordinal, const std::string& what, std::exception_ptr cause)
        : error("cell " + std::to_string(ordinal) + " " + what), ordinal_(ordinal), cause_(std::move(cause)) {}

    std::size_t ordinal() const noexcept { return ordinal_; }
    const std::exception_ptr& cause() const noexcept { return cause_; }

private:
    std::size_t ordinal_;
    std::exception_ptr cause_;
};

} // namespace fdrlab
