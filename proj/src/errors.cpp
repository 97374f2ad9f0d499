#include "scorelab/errors.hpp"

namespace scorelab {

DecompositionError::DecompositionError(std::size_t pivot, double value)
    : Error("cholesky: pivot " + std::to_string(pivot) + " is not positive (" + std::to_string(value) + ")"),
      pivot_(pivot),
      value_(value) {}

DivergenceError::DivergenceError(const std::string& what, std::size_t step)
    : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

ParseError::ParseError(const std::string& what, std::size_t offset)
    : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
      row_(row),
      column_(column) {}

UnsupportedVersion::UnsupportedVersion(std::uint32_t found, std::uint32_t expected)
    : ParseError("unsupported model format version " + std::to_string(found) + " (expected " +
                     std::to_string(expected) + ")",
                 std::size_t{4}) {}

ConvergenceError::ConvergenceError(const std::string& what, double residual)
    : Error(what + " (last residual " + std::to_string(residual) + ")"), residual_(residual) {}

StageError::StageError(std::string stage, const std::string& cause)
    : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}

}  // namespace scorelab
