#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace scorelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Cholesky hit a non-positive pivot.
class DecompositionError : public Error {
public:
    DecompositionError(std::size_t pivot, double value);
    std::size_t pivot() const { return pivot_; }
    double value() const { return value_; }

private:
    std::size_t pivot_;
    double value_;
};

// Training produced a non-finite loss, or a Langevin chain left the finite reals.
// `step` is the epoch (training) or the chain step index (sampling).
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step);
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

class ParseError : public Error {
public:
    // Binary formats report a byte offset; text formats report row/column (1-based, 0 = n/a).
    ParseError(const std::string& what, std::size_t offset);
    ParseError(const std::string& what, std::size_t row, std::size_t column);
    std::size_t offset() const { return offset_; }
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t offset_ = 0;
    std::size_t row_ = 0;
    std::size_t column_ = 0;
};

class UnsupportedVersion : public ParseError {
public:
    UnsupportedVersion(std::uint32_t found, std::uint32_t expected);
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual);
    double residual() const { return residual_; }

private:
    double residual_;
};

// Wraps any failure inside an experiment pipeline with the stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause);
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace scorelab
