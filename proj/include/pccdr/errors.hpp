#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pccdr {

enum class ErrorKind {
    kParse,
    kValue,
    kInvalidInput,
    kIo,
    kDegenerateData,
    kNumerical,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t row)
        : Error(ErrorKind::kParse, "row " + std::to_string(row) + ": " + message), row_(row) {}

    // 1-based line number of the offending row.
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ValueError : public Error {
public:
    explicit ValueError(const std::string& message) : Error(ErrorKind::kValue, message) {}
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& message) : Error(ErrorKind::kInvalidInput, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorKind::kIo, message) {}
};

class DegenerateData : public Error {
public:
    explicit DegenerateData(const std::string& message)
        : Error(ErrorKind::kDegenerateData, message) {}
};

class NumericalError : public Error {
public:
    NumericalError(const std::string& message, std::size_t iteration)
        : Error(ErrorKind::kNumerical, message), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace pccdr
