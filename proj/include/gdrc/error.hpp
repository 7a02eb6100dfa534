#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gdrc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension or structural mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

// Fewer samples than an estimator needs.
struct InsufficientData : Error {
    using Error::Error;
};

// Scalar argument outside its admissible range.
struct RangeError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t row, std::size_t col)
        : Error(msg + " (row " + std::to_string(row) + ", col " + std::to_string(col) + ")"),
          row(row),
          col(col) {}
    std::size_t row = 0;
    std::size_t col = 0;
};

struct LabelError : Error {
    using Error::Error;
};

// A dataset with a single class, or an empty one where both classes are required.
struct DegenerateDataset : Error {
    using Error::Error;
};

struct DegenerateSplit : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Numerical breakdown (singular factor, failed iteration) after regularization.
struct NumericalError : Error {
    using Error::Error;
};

// A standing model assumption does not hold for the given inputs.
struct AssumptionViolated : Error {
    using Error::Error;
};

// An operation needs the dual certificate blocks, and the classifier has none.
struct CertificateRequired : Error {
    using Error::Error;
};

}  // namespace gdrc
