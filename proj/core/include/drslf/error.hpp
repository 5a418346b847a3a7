#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drslf {

// Base of every exception thrown by the library. category() is a short
// lowercase tag used by the CLI for machine-parsable error lines.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("argument", message) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error("shape", message) {}
};

// Ingestion failure; line() is 1-based, 0 when not tied to a line.
class DataError : public Error {
public:
    DataError(const std::string& message, std::size_t line = 0)
        : Error("data", line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& message) : Error("solver", message) {}
};

class TrainingError : public Error {
public:
    TrainingError(const std::string& message, std::size_t epoch)
        : Error("training", "epoch " + std::to_string(epoch) + ": " + message), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace drslf
