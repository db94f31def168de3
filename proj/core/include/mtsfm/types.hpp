// types.hpp - shared aliases and error types for the mtsfm library.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace mtsfm {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched or unusable array dimensions (e.g. too few samples for the
/// requested harmonic count).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Sample rate cannot represent the waveform's instantaneous frequency swing.
class NyquistError : public Error {
public:
    using Error::Error;
};

/// The correlation magnitude has no interior local minimum, so no mainlobe
/// null (and no sidelobe region) can be defined.
class NoNullFound : public Error {
public:
    using Error::Error;
};

/// A requested mainlobe/sidelobe region contains no samples.
class EmptyRegion : public Error {
public:
    using Error::Error;
};

/// Backtracking line search exhausted its reduction budget without
/// satisfying sufficient decrease.
class LineSearchStalled : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or file content.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace mtsfm
