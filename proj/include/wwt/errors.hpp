#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wwt {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or network violates one of its construction invariants.
/// `measured()` carries the offending quantity (overlap, |h12|, ...).
class ModelError : public Error {
public:
    explicit ModelError(const std::string& what, double measured = 0.0)
        : Error(what), measured_(measured) {}
    double measured() const noexcept { return measured_; }

private:
    double measured_;
};

/// Argument outside the domain of an operation (Re z < 0, omega at a band edge, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A formfactor has zero norm, so a normalized overlap is undefined.
class ZeroNormError : public Error {
public:
    using Error::Error;
};

/// Quadrature or solver did not reach its tolerance. `estimate()` is the achieved error.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// The resolvent denominator vanishes: a discrete pole sits on the evaluation contour.
class PoleError : public NumericalError {
public:
    PoleError(const std::string& what, cplx location)
        : NumericalError(what, 0.0), location_(location) {}
    cplx location() const noexcept { return location_; }

private:
    cplx location_;
};

}  // namespace wwt
