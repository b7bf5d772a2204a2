#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace twoproj {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by every module. Defaults are the library's
/// documented contract; callers override individual fields.
struct Tolerances {
    double hermitian = 1e-10;        ///< relative asymmetry allowed by hermitian_eig
    double projection = 1e-9;        ///< validate_projection residual for pair inputs
    double cluster = 1e-8;           ///< Halmos clustering of eigenvalues near 0 and 1
    double spectral_cut = 1e-12;     ///< relative distance of an eigenvalue to a window edge
    double psd = 1e-10;              ///< relative negativity clamped by sqrt_psd
    double span_check = 1e-8;        ///< generic-part pairing consistency
    double containment = 1e-9;       ///< reduce_by_common_subspace containment residual
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not certify its result; carries the residual.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An eigenvalue sits on the edge of a requested spectral window.
class SpectralCutAmbiguous : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Input violates a documented precondition (shape, hermiticity, projection, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed; `position()` is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), message_(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }
    /// The message without the position suffix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t position_;
};

inline double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace twoproj
