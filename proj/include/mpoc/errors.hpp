// mpoc — typed error hierarchy shared by all modules.
#ifndef MPOC_ERRORS_HPP
#define MPOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mpoc {

/// Base class for every error the toolkit throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape mismatch (non-square input, non-conforming right-hand side, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain (NaN entries, bad sign flag, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Singular or numerically rank-deficient operator; carries the estimate
/// that triggered the rejection (reciprocal condition number, or 0 when the
/// deficiency was detected by rank).
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double rcond_estimate)
        : Error(what), rcond(rcond_estimate) {}
    double rcond;
};

/// Problem-instance validation failure (config invariants).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computed trajectory contradicts its declared structure
/// (terminal or junction condition violated — wrong region or t_s).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed: the residual does not change sign on the
/// search interval (the queried point is not in a transitional region).
class BracketError : public Error {
public:
    using Error::Error;
};

/// Too few accepted samples to fit the requested model.
class InsufficiencyError : public Error {
public:
    using Error::Error;
};

/// The data contradict a structural assumption of the model class
/// (e.g. an oracle probe that cannot be labelled with a single switch,
/// or a condensed Hessian that is not positive definite).
class ModelError : public Error {
public:
    using Error::Error;
};

/// A hard enumeration budget would be exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// An independent numerical oracle failed to converge.
class OracleError : public Error {
public:
    using Error::Error;
};

}  // namespace mpoc

#endif  // MPOC_ERRORS_HPP
